from pathlib import Path

import pytest

import entrates as er

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def golden() -> Path:
    return GOLDEN


def merge_two_qubit_groups(state):
    """Regroup a six-qubit state (X1, Y1, Z1, X2, Y2, Z2) into three ququarts."""
    return er.merge_parties(
        state,
        [("A", ("A1", "A2")), ("B", ("B1", "B2")), ("C", ("C1", "C2"))],
    )


def double_ghz():
    """GHZ x GHZ with each party holding its two qubits as one system."""
    return merge_two_qubit_groups(
        er.tensor_product(
            er.ghz_state(3, labels=("A1", "B1", "C1")),
            er.ghz_state(3, labels=("A2", "B2", "C2")),
        )
    )


def three_bells():
    """Bell pairs on A1B1, A2C1, B2C2, regrouped to three ququarts."""
    return merge_two_qubit_groups(
        er.tensor_product(
            er.bell_state(("A1", "B1")),
            er.bell_state(("A2", "C1")),
            er.bell_state(("B2", "C2")),
        )
    )


def bell_bell_source():
    """Bell(A1, B) x Bell(A2, C) with Alice holding both left halves."""
    return er.merge_parties(
        er.tensor_product(er.bell_state(("A1", "B")), er.bell_state(("A2", "C"))),
        [("A", ("A1", "A2")), ("B", ("B",)), ("C", ("C",))],
    )


def catalyst_demo_pair():
    """Source with S(AB1) > S(A): Bell(B1, B2a) x GHZ(A, B2b, B3).

    Against a four-party GHZ target the planner must execute orders with
    negative entries, so a positive catalyst budget results.
    """
    psi = er.merge_parties(
        er.tensor_product(
            er.bell_state(("B1", "B2a")),
            er.ghz_state(3, labels=("A", "B2b", "B3")),
        ),
        [("A", ("A",)), ("B1", ("B1",)), ("B2", ("B2a", "B2b")), ("B3", ("B3",))],
    )
    phi = er.ghz_state(4, labels=("A", "B1", "B2", "B3"))
    return psi, phi
