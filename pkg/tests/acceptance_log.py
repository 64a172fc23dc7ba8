"""Collects one PASS/FAIL line per acceptance criterion."""

RESULTS: list[str] = []


def report(name: str, ok: bool, detail: str = "") -> bool:
    line = f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else "")
    RESULTS.append(line)
    print(line)
    return ok
