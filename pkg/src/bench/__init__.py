"""drift sweep 실험 하네스."""
