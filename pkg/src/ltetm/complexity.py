"""Per-iteration operation-count model for the two early-termination methods.

Three categories are kept apart: additions, sign-domain operations (abs, sign
and XOR, all weighted equally), and compares.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass
class OpCounts:
    additions: float = 0.0
    sign_domain_ops: float = 0.0
    compares: float = 0.0

    def add(self, additions=0, sign_domain_ops=0, compares=0) -> None:
        self.additions += additions
        self.sign_domain_ops += sign_domain_ops
        self.compares += compares

    def __add__(self, other: "OpCounts") -> "OpCounts":
        return OpCounts(
            self.additions + other.additions,
            self.sign_domain_ops + other.sign_domain_ops,
            self.compares + other.compares,
        )

    def scaled(self, factor: float) -> "OpCounts":
        return OpCounts(self.additions * factor, self.sign_domain_ops * factor, self.compares * factor)

    @property
    def total(self) -> float:
        return self.additions + self.sign_domain_ops + self.compares

    def as_dict(self) -> dict:
        return asdict(self)


def csr_cost(n, k, lambda1, rho, dc_max=None) -> OpCounts:
    """CSR column: ``N + K(1 - lambda1)`` additions, ``N sum d rho_d`` sign ops, ``K`` compares."""
    degrees = [d for d in rho if dc_max is None or d <= dc_max]
    return OpCounts(
        additions=n + k * (1.0 - lambda1),
        sign_domain_ops=n * sum(d * rho[d] for d in degrees),
        compares=float(k),
    )


def num_v2c_messages(n, avg_degree) -> float:
    return n * avg_degree


def lrm_cluster_size(n, avg_degree, b_fraction) -> float:
    """Un-rounded cluster size ``B * N * avg_degree``."""
    return b_fraction * num_v2c_messages(n, avg_degree)


def lrm_cost(n, avg_degree, b_fraction, l_avg) -> OpCounts:
    """LRM column: ``N_B`` additions and sign ops, ``N_B + 2 N_mv2c / l_avg`` compares."""
    if not l_avg > 0:
        raise ValueError(f"l_avg must be positive, got {l_avg}")
    n_msgs = num_v2c_messages(n, avg_degree)
    n_b = b_fraction * n_msgs
    return OpCounts(additions=n_b, sign_domain_ops=n_b, compares=n_b + 2.0 * n_msgs / l_avg)


def quickselect_amortized(n_msgs, l_avg) -> float:
    return 2.0 * n_msgs / l_avg


@dataclass
class Reconciliation:
    category: str
    measured: float
    model: float
    tolerance: float

    @property
    def rel_diff(self) -> float:
        if self.model == 0:
            return 0.0 if self.measured == 0 else float("inf")
        return abs(self.measured - self.model) / abs(self.model)

    @property
    def passed(self) -> bool:
        return self.rel_diff <= self.tolerance

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict} {self.category}: measured={self.measured:.1f} model={self.model:.1f} "
            f"diff={100 * self.rel_diff:.2f}% (tol {100 * self.tolerance:.0f}%)"
        )


def reconcile(measured: OpCounts, model: OpCounts, tolerance: float = 0.10) -> list[Reconciliation]:
    return [
        Reconciliation(name, getattr(measured, name), getattr(model, name), tolerance)
        for name in ("additions", "sign_domain_ops", "compares")
    ]
