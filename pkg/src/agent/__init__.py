"""블랙박스 에이전트 시뮬레이터, drift 주입, 랜덤 상태 샘플링."""
