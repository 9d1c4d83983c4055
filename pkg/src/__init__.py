"""drift 된 에이전트 모델 차등 평가 패키지 루트."""
