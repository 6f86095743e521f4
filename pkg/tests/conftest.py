import pytest

from treesearch.trees import tree_from_dyck

# Breadth-first labels 0..9 in the worked example tree with 9 edges:
# root -> (1, 2, 3); 1 -> (4, 5); 4 -> (7,); 3 -> (6,); 6 -> (8, 9)
EXAMPLE_WORD = "UUUDDUDDUDUUUDUDDD"


@pytest.fixture
def example_tree():
    return tree_from_dyck(EXAMPLE_WORD)


# --- acceptance summary ----------------------------------------------------

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report_line(capsys):
    """Print one status line for an acceptance criterion and keep it for the summary."""
    def emit(k: int, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
