ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
