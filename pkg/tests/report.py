"""Collects one verdict line per acceptance criterion for the terminal summary."""

LINES = []


def record(number, ok, text):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {text}"
    LINES.append(line)
    print(line)
    return ok
