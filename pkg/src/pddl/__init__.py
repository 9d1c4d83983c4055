"""PDDL(typed STRIPS) 도메인/문제, 트레이스, 질의 로그 입출력."""
