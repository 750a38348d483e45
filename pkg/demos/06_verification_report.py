"""Run a verification suite programmatically and summarize the report."""

from flattorsion.report import SuiteConfig, render_report, run_suite

report = run_suite(SuiteConfig("s7", samples=10, seed=0))
for c in report.checks:
    verdict = "pass" if c.passed else "FAIL"
    print(f"{verdict:4}  {c.check_id:32} {c.max_residual:10.2e} {c.comparison} {c.tolerance:.0e}")
print("suite passed:", report.passed)
print(render_report(report, "csv").splitlines()[0])
