import re


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion at the end of a run."""
    rows = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" not in nodeid or getattr(rep, "when", "call") != "call":
                continue
            m = re.search(r"criterion_(\d+)", nodeid)
            if m:
                rows.append((int(m.group(1)), nodeid.split("::")[-1], status))
    if not rows:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num, name, status in sorted(rows):
        verdict = "PASS" if status == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {verdict} ({name})")
