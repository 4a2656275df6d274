"""Shared record of acceptance outcomes, printed by conftest at the end of a run."""

RESULTS = {}


def record(number: int, title: str, ok: bool, detail: str = "") -> None:
    RESULTS[number] = ("PASS" if ok else "FAIL", title, detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}" + (f" ({detail})" if detail else ""))
