"""Numerical certificates for the expansion mechanism near a singularity.

The linearization of the trace map at the singular fixed point (1,1,1)
has eigenvalues ((3+sqrt5)/2, -1, (3-sqrt5)/2); the large one is the
square of the golden mean.  Synthetic model maps close to
diag(1/lambda, 1, lambda) with an invariant plane {z=0} let us test the
predicted cone expansion quantitatively: vectors in the cone

    |v_z| >= C2 sqrt(|z_p|) |v_xy|

must grow by at least lambda^((N/2)(1-4 eps)) by the time the orbit's
z-coordinate exits past 1, and end up within a sqrt(delta)-thin cone
around the z-axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LAMBDA_BIG",
    "ExpansionReport",
    "ModelMap",
    "SingularEigenData",
    "cone_member_3d",
    "expansion_certificate",
    "make_model_map",
    "sample_cone_vector_3d",
    "singular_eigen",
]

LAMBDA_BIG = (3.0 + np.sqrt(5.0)) / 2.0

DT_SINGULAR = np.array(
    [
        [2.0, 2.0, -1.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
    ]
)


@dataclass(frozen=True)
class SingularEigenData:
    matrix: np.ndarray
    eigenvalues: np.ndarray   # descending by magnitude: big, -1, small
    eigenvectors: np.ndarray  # columns matching eigenvalues


def singular_eigen() -> SingularEigenData:
    """Eigen-decomposition of the differential at the singular fixed point.

    The characteristic polynomial factors as (x + 1)(x^2 - 3x + 1), so
    the eigenvalues are (3 +- sqrt5)/2 and -1 exactly.
    """
    vals, vecs = np.linalg.eig(DT_SINGULAR)
    by_real = sorted(range(3), key=lambda i: -vals[i].real)
    # descending real parts give (big, small, -1); report (big, -1, small)
    idx = [by_real[0], by_real[2], by_real[1]]
    vals = vals[idx].real
    vecs = vecs[:, idx].real
    vecs = vecs / np.linalg.norm(vecs, axis=0, keepdims=True)
    return SingularEigenData(
        matrix=DT_SINGULAR.copy(), eigenvalues=vals, eigenvectors=vecs
    )


def cone_member_3d(v, z_p: float, c2: float) -> bool:
    """Membership in the cone |v_z| >= C2 sqrt(|z_p|) |v_xy|.

    The boundary counts as inside: the defining inequality is non-strict.
    """
    if c2 <= 0.0:
        raise ValueError("C2 must be > 0")
    v = np.asarray(v, dtype=float)
    if np.linalg.norm(v) == 0.0:
        raise ValueError("zero vector has no cone membership")
    v_xy = np.linalg.norm(v[:2])
    return bool(abs(v[2]) >= c2 * np.sqrt(abs(z_p)) * v_xy)


@dataclass
class ModelMap:
    """A perturbation of diag(1/lambda, 1, lambda) fixing the plane {z=0}.

    The off-linear terms all carry a factor of z, so the plane is
    exactly invariant; phases make distinct seeds give distinct maps.
    ``delta`` and ``c1`` are the audited bounds on ||Df - A|| and on the
    second derivatives over the working box.
    """

    lam: float
    delta: float
    c1: float
    phases: np.ndarray = field(default_factory=lambda: np.zeros(3))

    @property
    def linear(self) -> np.ndarray:
        return np.diag([1.0 / self.lam, 1.0, self.lam])

    def __call__(self, p) -> np.ndarray:
        x, y, z = np.asarray(p, dtype=float)
        s = self.delta / 8.0
        f1 = x / self.lam + s * z * np.sin(x + y + self.phases[0])
        f2 = y + s * z * np.cos(x - y + self.phases[1])
        f3 = self.lam * z + s * z * np.sin(x + self.phases[2])
        return np.array([f1, f2, f3])

    def jacobian(self, p) -> np.ndarray:
        x, y, z = np.asarray(p, dtype=float)
        s = self.delta / 8.0
        c_xy = np.cos(x + y + self.phases[0])
        s_xy = np.sin(x + y + self.phases[0])
        s_xmy = np.sin(x - y + self.phases[1])
        c_xmy = np.cos(x - y + self.phases[1])
        s_x = np.sin(x + self.phases[2])
        c_x = np.cos(x + self.phases[2])
        return np.array(
            [
                [1.0 / self.lam + s * z * c_xy, s * z * c_xy, s * s_xy],
                [-s * z * s_xmy, 1.0 + s * z * s_xmy, s * c_xmy],
                [s * z * c_x, 0.0, self.lam + s * s_x],
            ]
        )

    def audit(self, box: float = 2.0, samples: int = 10000, rng=None) -> dict:
        """Sampled check of the three structural hypotheses."""
        rng = np.random.default_rng(rng)
        pts = rng.uniform(-box, box, size=(samples, 3))
        worst_df = 0.0
        for p in pts:
            dev = np.linalg.norm(self.jacobian(p) - self.linear, ord=2)
            worst_df = max(worst_df, dev)
        # all second partials of the perturbation are bounded by
        # (delta/8) * (|z| + 2) on the box
        second = (self.delta / 8.0) * (box + 2.0)
        plane_drift = max(
            abs(self(np.array([x, y, 0.0]))[2])
            for x, y in rng.uniform(-box, box, size=(64, 2))
        )
        return {
            "df_deviation": worst_df,
            "df_ok": worst_df < self.delta or self.delta == 0.0,
            "second_derivative_bound": second,
            "c2_norm_ok": second <= self.c1,
            "plane_invariant": plane_drift == 0.0,
        }


def make_model_map(
    lam: float = LAMBDA_BIG,
    delta: float = 1e-3,
    c1: float = 1.0,
    seed: int | None = None,
    audit_samples: int = 10000,
) -> ModelMap:
    """Construct and audit a model map with the declared bounds."""
    if lam <= 1.0:
        raise ValueError("lambda must be > 1")
    if delta < 0.0:
        raise ValueError("delta must be >= 0")
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=3)
    m = ModelMap(lam=lam, delta=delta, c1=c1, phases=phases)
    report = m.audit(samples=audit_samples, rng=rng)
    if delta > 0.0 and not report["df_ok"]:
        raise ValueError(
            f"construction failed its own audit: ||Df - A|| reached "
            f"{report['df_deviation']:.3e} >= delta={delta:g}"
        )
    if not report["c2_norm_ok"]:
        raise ValueError(
            "requested delta/C1 combination unattainable: second "
            f"derivatives reach {report['second_derivative_bound']:.3e}"
        )
    return m


@dataclass
class ExpansionReport:
    exit_time: int
    status: str                  # "ok" or "inconclusive"
    growth_ratios: np.ndarray    # |Df^k v| / |v| for k = 1..N
    final_tilt: float            # |u_xy| / |u_z|
    expansion_at_exit_ok: bool
    thin_cone_ok: bool
    expansion_along_orbit_ok: bool | None  # None when eta-condition unmet

    @property
    def all_ok(self) -> bool:
        return (
            self.status == "ok"
            and self.expansion_at_exit_ok
            and self.thin_cone_ok
            and self.expansion_along_orbit_ok in (True, None)
        )


def sample_cone_vector_3d(
    z_p: float, c2: float, rng=None
) -> np.ndarray:
    """Random unit vector in the cone at a point with z-coordinate z_p."""
    rng = np.random.default_rng(rng)
    phi = rng.uniform(0.0, 2.0 * np.pi)
    v_xy = np.array([np.cos(phi), np.sin(phi)])
    floor = c2 * np.sqrt(abs(z_p))
    vz = floor * np.exp(rng.uniform(0.0, np.log(1e6))) * rng.choice([-1, 1])
    v = np.array([v_xy[0], v_xy[1], vz])
    return v / np.linalg.norm(v)


def expansion_certificate(
    m: ModelMap,
    p,
    v,
    c2: float = 1.0,
    epsilon: float = 0.1,
    eta: float = 0.5,
    max_iter: int = 100000,
) -> ExpansionReport:
    """Push a cone vector to the exit time and test the expansion bounds.

    N is the first iterate whose z-coordinate exceeds 1.  Checks, in the
    Euclidean norm: growth by lambda^((N/2)(1-4 eps)) at exit, final
    tilt |u_xy| < 2 sqrt(delta) |u_z|, and, when the start already has
    |v_z| >= eta |v_xy|, growth by (eta/2) lambda^((k/2)(1-4 eps)) at
    every intermediate step.
    """
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    if not 0.0 < p[2] < 1.0:
        raise ValueError("start point must have z in (0, 1)")
    if not cone_member_3d(v, p[2], c2):
        raise ValueError("start vector is outside the cone")
    v0_norm = np.linalg.norm(v)
    rate = m.lam ** (0.5 * (1.0 - 4.0 * epsilon))
    eta_start = abs(v[2]) >= eta * np.linalg.norm(v[:2])
    w = v.copy()
    q = p.copy()
    ratios = []
    orbit_ok = True
    for k in range(1, max_iter + 1):
        w = m.jacobian(q) @ w
        q = m(q)
        g = np.linalg.norm(w) / v0_norm
        ratios.append(g)
        if eta_start and g < 0.5 * eta * rate**k:
            orbit_ok = False
        if q[2] > 1.0:
            u_xy = np.linalg.norm(w[:2])
            u_z = abs(w[2])
            return ExpansionReport(
                exit_time=k,
                status="ok",
                growth_ratios=np.array(ratios),
                final_tilt=u_xy / u_z if u_z > 0 else np.inf,
                expansion_at_exit_ok=bool(g >= rate**k),
                thin_cone_ok=bool(
                    u_xy < 2.0 * np.sqrt(m.delta) * u_z
                    if m.delta > 0.0
                    # delta = 0: the xy-part cannot have grown at all
                    else u_xy <= np.linalg.norm(v[:2]) * (1.0 + 1e-12)
                ),
                expansion_along_orbit_ok=orbit_ok if eta_start else None,
            )
    return ExpansionReport(
        exit_time=max_iter,
        status="inconclusive",
        growth_ratios=np.array(ratios),
        final_tilt=np.nan,
        expansion_at_exit_ok=False,
        thin_cone_ok=False,
        expansion_along_orbit_ok=None,
    )
