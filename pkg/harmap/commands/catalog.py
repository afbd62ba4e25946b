import argparse

from ..catalog import describe_catalog
from ..export import emit, render_json
from ..logger import get_logger
from ..utils.error_handlers import EXIT_OK

logger = get_logger("commands.catalog")


def _known_line(name: str, known: dict) -> str:
    if known is None:
        return f"{name}: parameters required"
    parts = []
    if known["mu"] is not None:
        parts.append(f"mu={known['mu']:g}")
    if known["upper"] is not None:
        parts.append(f"upper={known['upper']:g}")
    return f"{name}: " + (", ".join(parts) if parts else "orders unknown")


def run(args: argparse.Namespace, config) -> int:
    """카탈로그 이름, 파라미터 스키마, 알려진 차수 출력"""
    listing = describe_catalog()
    if args.format == "json":
        emit(render_json(listing), args.out)
        return EXIT_OK

    lines = []
    for name, entry in listing.items():
        lines.append(_known_line(name, entry["known"]))
        if entry["params"]:
            params = ", ".join(
                f"{p}: {spec['type']}" + (f" = {spec['default']}" if spec["default"] is not None else "")
                for p, spec in entry["params"].items()
            )
            lines.append(f"    params: {params}")
        lines.append(f"    {entry['description']}")
        if entry["known"] and entry["known"]["provenance"]:
            lines.append(f"    known from: {entry['known']['provenance']}")
    emit("\n".join(lines) + "\n", args.out)
    logger.debug(f"listed {len(listing)} catalog entries")
    return EXIT_OK


def register(subparsers) -> None:
    parser = subparsers.add_parser("catalog", help="list catalog maps and their known orders")
    parser.add_argument("--format", choices=["text", "json"], default="text")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.set_defaults(handler=run, needs_config=False)
