"""grounding, closed-world 실행, 최적(BFS) 플래너."""
