"""런타임 설정(.env)과 벤치 실험 설정 스키마."""
