"""pal-tuple 기반 STRIPS 모델 표현 패키지."""
