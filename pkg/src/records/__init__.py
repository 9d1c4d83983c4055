"""벤치 결과 레코드와 기록기."""
