"""Shared record of acceptance outcomes, printed at the end of the session."""

ACCEPTANCE: dict = {}


def record(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (ok, detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail}")
