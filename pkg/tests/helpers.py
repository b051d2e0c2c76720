"""Shared family fixtures for the test modules."""

from ncprod.families import FamilySpec, TEMPLATES, abcd_tensor, make, make_family
from ncprod.linalg import Matrix
from ncprod.quaternion import j_matrix
from ncprod.rmatrix import RMatrix


def template(kind: str, sign: str = "+") -> RMatrix:
    obj = dict(TEMPLATES[kind])
    if "sign" in obj:
        obj["sign"] = sign
    return make_family(FamilySpec.from_json(obj))


def battery() -> dict[str, RMatrix]:
    """Every family point of the axiom battery, keyed by a readable label."""
    out = {f"classical({n1},{n2})": RMatrix.classical(n1, n2) for n1 in range(1, 5) for n2 in range(1, 5)}
    out["theta4"] = make("theta4", u="3/5", v="4/5")
    for sign in "+-":
        out[f"toric8{sign}"] = make("toric8", sign, u="3/5", v="4/5", n=[0, 0, 1])
        out[f"quaternionic{sign}"] = template("quaternionic", sign)
        out[f"stratum1{sign}"] = template("stratum1", sign)
        out[f"stratum2{sign}"] = template("stratum2", sign)
    out["abcd"] = template("abcd")
    return out


def small_battery() -> dict[str, RMatrix]:
    """One point per kind (both signs where they exist) plus two classical shapes."""
    b = battery()
    return {k: v for k, v in b.items() if not k.startswith("classical")} | {
        "classical(1,1)": b["classical(1,1)"],
        "classical(3,2)": b["classical(3,2)"],
    }


def theta_raw(u, v) -> RMatrix:
    """theta4 tensor built without the circle constraint."""
    a = Matrix.identity(2) * u
    c = Matrix([[0, -1], [1, 0]])
    d = Matrix([[0, 1], [-1, 0]]) * v
    return abcd_tensor(a, Matrix.identity(2), c, d)


def squares_defective_abcd() -> RMatrix:
    one = Matrix.identity(4)
    j = j_matrix("+", 1)
    return abcd_tensor(one, one, j, j)


# acceptance results, printed by the terminal summary hook in conftest
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}
