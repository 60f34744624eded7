import pytest

from gwpdesign import Block, BlockStructure, Poset

N_RELATIONS = [(1, 3), (2, 3), (2, 4)]


@pytest.fixture
def chain22():
    return BlockStructure(Poset.chain(2), (2, 2))


@pytest.fixture
def chain22_block(chain22):
    return Block(chain22, [(0, 0), (1, 0), (0, 1)])


@pytest.fixture
def n_poset():
    return Poset.from_relations([1, 2, 3, 4], N_RELATIONS)


@pytest.fixture
def grid_poset():
    # 1 < 3 with 2 unrelated
    return Poset.from_relations([1, 2, 3], [(1, 3)])


@pytest.fixture
def v_poset():
    return Poset.from_relations([1, 2, 3], [(1, 2), (1, 3)])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
