import os
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

PHI_PSI = """\
* #variable= 6 #constraint= 2
min: -1 x1 -1 x2 -1 x3 -1 x4 -1 x5 -1 x6 ;
+1 x1 +1 x2 +1 x3 +1 x4 +1 x5 < 4 ;
+2 x1 +2 x2 +2 x3 +2 x4 +5 x5 +18 x6 < 23 ;
"""


def _compile_dpll(tmp: Path):
    cc = shutil.which("cc") or shutil.which("gcc") or shutil.which("clang")
    if not cc:
        return None
    exe = tmp / "dpll"
    r = subprocess.run([cc, "-O2", "-o", str(exe), str(HERE / "support" / "dpll.c")],
                       capture_output=True)
    return str(exe) if r.returncode == 0 else None


@pytest.fixture(scope="session")
def dpll_solver(tmp_path_factory):
    path = _compile_dpll(tmp_path_factory.mktemp("solver"))
    if path is None:
        pytest.skip("no C compiler for the test DPLL solver")
    return path


@pytest.fixture(scope="session")
def cadical_solver():
    pytest.importorskip("pysat")
    return str(HERE / "support" / "pysat_solver.py")


@pytest.fixture
def phi_psi_file(tmp_path):
    p = tmp_path / "phi_psi.opb"
    p.write_text(PHI_PSI)
    return p


ACCEPTANCE_LINES: dict[int, str] = {}


def report_acceptance(number: int, ok: bool, detail: str) -> None:
    line = f"acceptance {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
