"""공통 유틸 모듈 (에러 계층, 시드 파생)."""
