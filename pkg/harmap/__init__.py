# 조화 사상 연산자/차수 분석 패키지
__version__ = "1.0.0"
