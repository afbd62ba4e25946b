from . import catalog, criteria, distortion, evaluate, grid_export, order, trajectory

# 하위 명령 모듈 (등록 순서 = 도움말 출력 순서)
COMMANDS = (catalog, evaluate, order, trajectory, distortion, criteria, grid_export)
