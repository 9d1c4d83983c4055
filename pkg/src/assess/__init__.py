"""drift 된 에이전트 모델의 차등 평가 (affected pal-tuple 탐지, 질의, sieve)."""
