ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        res = ACCEPTANCE_RESULTS[n]
        tr.write_line(f"{res.line()}  ({res.seconds:.1f} s)")
        if not res.passed:
            for c in res.checks:
                if not c.passed:
                    tr.write_line(f"    {c.name}: {c.detail}")
