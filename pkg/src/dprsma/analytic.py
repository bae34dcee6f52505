"""Closed-form outage probabilities and ergodic sum-rates, plus their oracles.

The outage expressions come from modelling every effective link gain as an
exponential-family variable with rate parameter proportional to
phi = M_bar / tr(F^H R F), assuming independence between the desired-gain and
interference terms.  The gain-sampling oracle draws from exactly those
distributions, so closed forms are testable against it to Monte Carlo
precision; the full link simulation (module mc) additionally carries the
correlations the closed forms neglect.

All exponential-integral combinations are evaluated in scaled form
(exp(x) * Ei(-x), exp(x) * E_n(x)) so that no intermediate overflows for
extreme SNR / leakage values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .results import MetricEstimate
from .specfun import (
    ei_neg_scaled,
    exp_integral_ei_neg,
    expn,
    expn_scaled,
    truncated_exp_series,
)

LN2 = math.log(2.0)

# Overshoot beyond [0, 1] up to this much is floating-point noise and clamped;
# anything larger indicates an implementation or parameter inconsistency.
PROB_CLAMP_TOL = 1e-12

# Relative distance at which removable-singularity parameters are nudged off
# their singular manifold (the expressions are continuous limits there).
SINGULARITY_REL = 1e-9

# The chi -> 1 manifold needs a wider berth: the five-term diversity forms
# carry (1-chi)^-2 conditioning, so evaluating closer than this loses the
# result to cancellation.
CHI_ONE_NUDGE = 1e-4


class NumericalConsistencyError(RuntimeError):
    """A closed form produced a value inconsistent with being a probability."""


@dataclass(frozen=True)
class AnalyticParams:
    """Scalar parameters of the closed-form expressions for one user."""

    phi: float
    zeta: float
    alpha: float
    beta: float
    chi: float
    xi: float
    num_users: int
    rho: float
    tau_c: float = 0.0
    tau_p: float = 0.0

    @classmethod
    def from_rates(cls, rate_common: float, rate_private: float, **kw) -> "AnalyticParams":
        return cls(tau_c=2.0 ** rate_common - 1.0, tau_p=2.0 ** rate_private - 1.0, **kw)


def phi_factor(F: np.ndarray, R: np.ndarray) -> float:
    """Rate parameter phi = M_bar / tr(F^H R F) with M_bar = 2 * columns(F)."""
    tr = float(np.trace(F.conj().T @ R @ F).real)
    if tr <= 0:
        raise ValueError(f"tr(F^H R F) must be positive, got {tr}")
    m_bar = 2 * F.shape[1]
    return m_bar / tr


def _as_probability(p: float, context: str, conditioning: float = 1.0) -> float:
    """Clamp floating-point overshoot beyond [0, 1]; raise on anything larger.

    `conditioning` widens the tolerated overshoot for expressions whose
    alternating terms are amplified (e.g. by (1-chi)^-2) before cancelling.
    """
    tol = max(PROB_CLAMP_TOL, 1e-13 * conditioning)
    if math.isnan(p):
        raise NumericalConsistencyError(f"{context} produced NaN")
    if p < -tol or p > 1.0 + tol:
        raise NumericalConsistencyError(f"{context} produced {p}, outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def _nudge(value: float, pole: float, scale: float) -> float:
    """Move `value` off the removable singularity at `pole`."""
    if abs(value - pole) < SINGULARITY_REL * max(abs(scale), 1.0):
        return pole + SINGULARITY_REL * max(abs(scale), 1.0) * (
            1.0 if value >= pole else -1.0
        )
    return value


# ---------------------------------------------------------------------------
# Outage probabilities (six closed forms + combination rules)
# ---------------------------------------------------------------------------

def outage_common_pmux(p: AnalyticParams) -> float:
    """Common-message outage under polarization multiplexing."""
    if p.tau_c == 0.0:
        return 0.0
    val = 1.0 - (p.alpha / (p.alpha + p.chi * p.beta * p.tau_c)) ** p.num_users * math.exp(
        -p.phi * p.tau_c / (p.rho * p.zeta * p.alpha)
    )
    return _as_probability(val, "outage_common_pmux")


def outage_private_pmux(p: AnalyticParams) -> float:
    """Private-message outage under polarization multiplexing."""
    if p.tau_p == 0.0:
        return 0.0
    val = 1.0 - p.beta / (p.chi * p.alpha * p.tau_p + p.beta) * math.exp(
        -p.phi * p.tau_p / (p.rho * p.zeta * p.beta)
    )
    return _as_probability(val, "outage_private_pmux")


def outage_common_pdiv(p: AnalyticParams) -> float:
    """Common-message outage under polarization diversity (max-gain selection)."""
    tau = p.tau_c
    if tau == 0.0:
        return 0.0
    a, b, chi, U = p.alpha, p.beta, p.chi, p.num_users
    rz = p.rho * p.zeta
    if chi == 0.0:
        val = 1.0 - 2.0 * (
            a / (a + b * tau) * math.exp(-p.phi * tau / (rz * a))
            - a / (2.0 * (a + 2.0 * b * tau)) * math.exp(-2.0 * p.phi * tau / (rz * a))
        )
        return _as_probability(val, "outage_common_pdiv")
    chi = min(chi, 1.0 - CHI_ONE_NUDGE)
    e1 = math.exp(-p.phi * tau / (rz * a))
    e2 = math.exp(-p.phi * tau / (rz * chi * a))
    t1 = a ** (U + 1) * (a + chi * b * tau) ** -U / ((1 - chi) * (a + b * tau)) * e1
    t2 = chi**2 * a ** (U + 1) * (a + b * tau) ** -U / ((1 - chi) * (chi * a + b * tau)) * e2
    t3 = (
        chi**3 * a ** (U + 1) * (a + 2 * b * tau) ** -U
        / (2 * (1 - chi) ** 2 * (chi * a + 2 * b * tau)) * e2 * e2
    )
    t4 = (
        a ** (U + 1) * (a + 2 * chi * b * tau) ** -U
        / (2 * (1 - chi) ** 2 * (a + 2 * b * tau)) * e1 * e1
    )
    t5 = (
        chi**2 * a ** (U + 1) * (a + (1 + chi) * b * tau) ** -U
        / ((1 - chi) ** 2 * (chi * a + (1 + chi) * b * tau)) * e1 * e2
    )
    return _as_probability(
        1.0 - 2.0 * (t1 - t2 - t3 - t4 + t5), "outage_common_pdiv",
        conditioning=(1.0 - chi) ** -2,
    )


def outage_private_pdiv(p: AnalyticParams) -> float:
    """Private-message outage under polarization diversity with SIC residual xi.

    The fourth chi != 0 term uses 1/(2 chi xi alpha tau + beta); the source
    expression carries a spurious extra chi^2 there, which contradicts both
    its own chi -> 0 limit and the underlying max/convolution model.
    """
    tau = p.tau_p
    if tau == 0.0:
        return 0.0
    a, b, chi, xi, U = p.alpha, p.beta, p.chi, p.xi, p.num_users
    K = p.phi * tau / (p.rho * p.zeta * b)
    if chi == 0.0:
        val = 1.0 - 2.0 * (
            b / (xi * a * tau + b) * math.exp(-K)
            - b / (2.0 * (2.0 * xi * a * tau + b)) * math.exp(-2.0 * K)
        )
        return _as_probability(val, "outage_private_pdiv")
    chi = min(chi, 1.0 - CHI_ONE_NUDGE)
    e1 = math.exp(-K)
    e2 = math.exp(-K / chi)
    s1 = (
        b**2 * (1 + chi * tau) ** (-U + 1)
        / ((1 - chi) * (xi * a * tau + b) * (chi * xi * a * tau + b)) * e1
    )
    s2 = (
        chi**2 * b**2 * (1 + tau) ** (-U + 1)
        / ((1 - chi) * (xi * a * tau + b) * (xi * a * tau + chi * b)) * e2
    )
    s3 = (
        chi**3 * b**2 * (1 + 2 * tau) ** (-U + 1)
        / (2 * (1 - chi) ** 2 * (2 * xi * a * tau + b) * (2 * xi * a * tau + chi * b))
        * e2 * e2
    )
    s4 = (
        b**2 * (1 + 2 * chi * tau) ** (-U + 1)
        / (2 * (1 - chi) ** 2 * (2 * xi * a * tau + b) * (2 * chi * xi * a * tau + b))
        * e1 * e1
    )
    s5 = (
        chi**2 * b**2 * (1 + (1 + chi) * tau) ** (-U + 1)
        / ((1 - chi) ** 2 * ((1 + chi) * xi * a * tau + b) * ((1 + chi) * xi * a * tau + chi * b))
        * e1 * e2
    )
    return _as_probability(
        1.0 - 2.0 * (s1 - s2 - s3 - s4 + s5), "outage_private_pdiv",
        conditioning=(1.0 - chi) ** -2,
    )


def outage_common_spmux(p: AnalyticParams) -> float:
    """Common-message outage under per-polarization RSMA (one polarization)."""
    tau = p.tau_c
    if tau == 0.0:
        return 0.0
    a, b, chi, U = p.alpha, p.beta, p.chi, p.num_users
    val = 1.0 - a / ((chi * tau + 1) * (a + b * tau)) * (
        1 + chi * b * tau / a
    ) ** -U * math.exp(-p.phi * tau / (p.rho * p.zeta * a))
    return _as_probability(val, "outage_common_spmux")


def outage_private_spmux(p: AnalyticParams) -> float:
    """Private-message outage under per-polarization RSMA with SIC residual xi."""
    tau = p.tau_p
    if tau == 0.0:
        return 0.0
    a, b, chi, xi, U = p.alpha, p.beta, p.chi, p.xi, p.num_users
    val = 1.0 - b**2 / ((xi * a * tau + b) * (chi * a * tau + b)) * (
        1 + chi * tau
    ) ** -U * math.exp(-p.phi * tau / (p.rho * p.zeta * b))
    return _as_probability(val, "outage_private_spmux")


def outage_total(p_common: float, p_private: float) -> float:
    """Union of common/private outage events under independence."""
    return _as_probability(
        p_common + p_private - p_common * p_private, "outage_total"
    )


def outage_sum_rate(
    outages: list[tuple[float, float]], rate_common: float, rates_private: list[float]
) -> float:
    """Outage sum-rate: sum over users of (1-Pc) Rc + (1-Pp) Rp_u."""
    if len(outages) != len(rates_private):
        raise ValueError("one (Pc, Pp) pair per private rate required")
    return sum(
        (1.0 - pc) * rate_common + (1.0 - pp) * rp
        for (pc, pp), rp in zip(outages, rates_private)
    )


# ---------------------------------------------------------------------------
# Transcendental helpers for the ergodic-rate closed forms
# ---------------------------------------------------------------------------

def _one_plus_signed_pow(ratio: float, n_plus_1: int) -> float:
    """1 + (-1)^(n_plus_1 - 1) * ratio^(n_plus_1), accurate when it cancels."""
    sign = -1.0 if (n_plus_1 - 1) % 2 else 1.0
    signed = sign * ratio ** n_plus_1
    if signed < 0 and abs(ratio) > 0:
        # 1 - |ratio|^(n+1): use expm1 for the near-cancellation |ratio| ~ 1
        return -math.expm1(n_plus_1 * math.log(abs(ratio)))
    return 1.0 + signed


def _phi_integral_scaled(theta: float, nu: float, total: float, n: int) -> float:
    """exp(total) * ∫_1^∞ t^(-(n+2)) Ei(-theta t - nu) dt with total = theta + nu.

    `total` must be supplied exactly (it is a simple expression of the outer
    arguments) because theta and nu can nearly cancel.
    """
    if n < 0:
        raise ValueError(f"series order n must be >= 0, got {n}")
    if theta <= 0 or total <= 0:
        raise ValueError(f"need theta > 0 and theta + nu > 0, got {theta}, {total}")
    if nu == 0.0:
        return (ei_neg_scaled(theta) + expn_scaled(n + 2, theta)) / (n + 1)
    ratio = theta / nu
    lead = ei_neg_scaled(total) * _one_plus_signed_pow(ratio, n + 1)
    acc = 0.0
    sgn = 1.0
    rpow = ratio
    for i in range(n + 1):
        acc += sgn * rpow * expn_scaled(n + 1 - i, theta)
        sgn = -sgn
        rpow *= ratio
    return (lead + acc) / (n + 1)


def phi_fn(mu: float, nu: float, tau: float, n: int) -> float:
    """Φ(mu, nu, tau, n) = ∫_1^∞ t^(-(n+2)) Ei(-mu tau t - nu) dt."""
    theta = mu * tau
    total = theta + nu
    return math.exp(-total) * _phi_integral_scaled(theta, nu, total, n)


def phi_bar_fn(mu: float, nu: float, tau: float, n: int) -> float:
    """Φ̄: dedicated nu = 0 evaluation, otherwise identical to Φ."""
    if nu == 0.0:
        theta = mu * tau
        return (exp_integral_ei_neg(theta) + expn(n + 2, theta)) / (n + 1)
    return phi_fn(mu, nu, tau, n)


def theta_fn(a: float, b: float, c: float, d: float, h: float, l: int) -> float:
    """Θ(a,b,c,d,h,l) = ∫_0^∞ (1+cz)^(1-l) e^(-hz) / ((1+z)(az+b)(az+db)) dz.

    Closed form assembled from scaled exponential integrals; removable
    singularities (a = b, a = db, d = 1) are evaluated at nudged parameters.
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    if a == 0.0:
        return _theta_a0(b, c, d, h, l)
    d = _nudge(d, 1.0, 1.0)
    a = _nudge(a, b, b)
    a = _nudge(a, d * b, d * b)
    # three simple poles at z = -1, -b/a, -d b/a with coefficients below;
    # each contributes -coef * exp(qh) Ei(-qh) plus (l-1) coef * scaled-Phi
    coef_a = 1.0 / ((a - b) * (a - d * b))
    coef_b = 1.0 / ((a - b) * b * (d - 1.0))
    coef_c = -1.0 / ((a - d * b) * b * (d - 1.0))
    total = -(
        coef_a * ei_neg_scaled(h)
        + coef_b * ei_neg_scaled(b * h / a)
        + coef_c * ei_neg_scaled(d * b * h / a)
    )
    if l == 1:
        return total
    n = l - 2
    theta = h / c
    j_a = _phi_scaled_or_bar(theta, h * (c - 1.0) / c, h, n)
    j_b = _phi_scaled_or_bar(theta, h * (b * c - a) / (a * c), h * b / a, n)
    j_c = _phi_scaled_or_bar(theta, h * (b * c * d - a) / (a * c), h * b * d / a, n)
    return total + (l - 1) * (coef_a * j_a + coef_b * j_b + coef_c * j_c)


def _phi_scaled_or_bar(theta: float, nu: float, total: float, n: int) -> float:
    """Scaled Φ with exact zero-nu dispatch (the Φ̄ case)."""
    if nu == 0.0:
        return (ei_neg_scaled(theta) + expn_scaled(n + 2, theta)) / (n + 1)
    return _phi_integral_scaled(theta, nu, total, n)


def _theta_a0(b: float, c: float, d: float, h: float, l: int) -> float:
    """Θ with a = 0: (1/(d b^2)) ∫ (1+cz)^(1-l) e^(-hz) / (1+z) dz."""
    if l == 1:
        return -ei_neg_scaled(h) / (d * b * b)
    if c == 1.0:
        w = expn_scaled(l, h)
    else:
        w = (1.0 - c) ** (1 - l) * (-ei_neg_scaled(h))
        sgn = 1.0
        for i in range(1, l):
            w += sgn * (c - 1.0) ** -i * expn_scaled(l - i, h / c)
            sgn = -sgn
    return w / (d * b * b)


def psi_fn(a: float, b: float, c: float, h: float, l: int) -> float:
    """Ψ(a,b,c,h,l) = ∫_0^∞ e^(-hz) / ((1+z)(a+cz)(a+bz)^l) dz.

    Removable singularity at a = c handled by nudging.
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    a = _nudge(a, c, c)
    al = a ** -l
    lead = al / (a - c) * (ei_neg_scaled(a * h / c) - ei_neg_scaled(h))
    theta = h * a / b
    j1 = _phi_scaled_or_bar(theta, h * (b - a) / b, h, l - 1)
    j2 = _phi_scaled_or_bar(theta, a * h * (b - c) / (b * c), a * h / c, l - 1)
    return lead + l * al / (a - c) * (j1 - j2)


def _two_pole_integral(a: float, b: float, h: float) -> float:
    """∫_0^∞ e^(-hz) / ((1+z)(az+b)) dz."""
    if a == 0.0:
        return -ei_neg_scaled(h) / b
    a = _nudge(a, b, b)
    return (ei_neg_scaled(b * h / a) - ei_neg_scaled(h)) / (b - a)


# ---------------------------------------------------------------------------
# Ergodic sum-rates
# ---------------------------------------------------------------------------

def _check_uniform(params: list[AnalyticParams]):
    p0 = params[0]
    for p in params[1:]:
        if (p.alpha, p.beta, p.chi, p.xi, p.phi, p.rho, p.num_users) != (
            p0.alpha, p0.beta, p0.chi, p0.xi, p0.phi, p0.rho, p0.num_users,
        ):
            raise ValueError("per-user params must share alpha/beta/chi/xi/phi/rho")
    if len(params) != p0.num_users:
        raise ValueError(f"expected {p0.num_users} per-user parameter sets")


def ergodic_common_pmux(params: list[AnalyticParams]) -> float:
    """Ergodic sum-rate of the common stream under PMUX (U times the min-rate).

    Evaluated from the exact integral of the min-SINR survival function,
    rearranged into scaled exponential integrals: no overflow for any chi
    and full precision in the chi -> 0 limit.
    """
    _check_uniform(params)
    p0 = params[0]
    U = p0.num_users
    inv_zeta_sum = sum(1.0 / p.zeta for p in params)
    B = p0.phi * inv_zeta_sum / (p0.rho * p0.alpha)
    total = 0.0
    for p in params:
        cb = p.chi * p.beta
        if cb == 0.0:
            total += -ei_neg_scaled(B) / LN2
            continue
        cb = _nudge(cb, p.alpha, p.alpha)
        n = U * U - 1
        theta = B * p.alpha / cb
        nu = B - theta
        ratio = theta / nu
        lead = ei_neg_scaled(B) * (
            (-1.0 if n % 2 else 1.0) * ratio ** (n + 1)
        )
        acc = 0.0
        sgn = 1.0
        rpow = ratio
        for i in range(n + 1):
            acc += sgn * rpow * expn_scaled(n + 1 - i, theta)
            sgn = -sgn
            rpow *= ratio
        total += (lead + acc) / LN2
    return total


def ergodic_private_pmux(params: list[AnalyticParams]) -> float:
    """Ergodic sum-rate of the private streams under PMUX."""
    _check_uniform(params)
    total = 0.0
    for p in params:
        K = p.phi / (p.rho * p.zeta * p.beta)
        ca = p.chi * p.alpha
        if ca == 0.0:
            total += -ei_neg_scaled(K) / LN2
            continue
        ca = _nudge(ca, p.beta, p.beta)
        Kc = p.phi / (p.rho * p.zeta * ca)
        total += p.beta / (LN2 * (p.beta - ca)) * (ei_neg_scaled(Kc) - ei_neg_scaled(K))
    return total


def ergodic_private_pdiv(params: list[AnalyticParams]) -> float:
    """Ergodic sum-rate of the private streams under PDIV (five-Θ-term form)."""
    _check_uniform(params)
    total = 0.0
    for p in params:
        a, b = p.alpha, p.beta
        chi, xi, U = p.chi, p.xi, p.num_users
        K = p.phi / (p.rho * p.zeta * b)
        if chi == 0.0:
            total += (2.0 / LN2) * (
                b * _two_pole_integral(xi * a, b, K)
                - 0.5 * b * _two_pole_integral(2.0 * xi * a, b, 2.0 * K)
            )
            continue
        chi = min(chi, 1.0 - CHI_ONE_NUDGE)
        xa = xi * a
        total += (
            2 * b**2 / (chi * (1 - chi)) * theta_fn(xa, b, chi, 1.0 / chi, K, U)
            - 2 * chi**2 * b**2 / (1 - chi) * theta_fn(xa, b, 1.0, chi, K / chi, U)
            - chi**3 * b**2 / (1 - chi) ** 2
            * theta_fn(2 * xa, b, 2.0, chi, 2 * K / chi, U)
            - b**2 / (chi * (1 - chi) ** 2)
            * theta_fn(2 * xa, b, 2 * chi, 1.0 / chi, 2 * K, U)
            + 2 * chi**2 * b**2 / (1 - chi) ** 2
            * theta_fn((1 + chi) * xa, b, 1 + chi, chi, (1 + chi) * K / chi, U)
        ) / LN2
    return total


def ergodic_common_pdiv(params: list[AnalyticParams]) -> float:
    """Ergodic sum-rate of the common stream under PDIV (five-Ψ-term form).

    Uses the pooled rate argument phi * sum_l(1/zeta_l) / (U rho alpha); the
    result is a tight upper bound on the simulated min-rate sum rather than
    its exact integral (the exact U-fold min expansion does not reduce to
    five terms).
    """
    _check_uniform(params)
    p0 = params[0]
    U = p0.num_users
    a, chi = p0.alpha, p0.chi
    H = p0.phi * sum(1.0 / p.zeta for p in params) / (U * p0.rho * a)
    total = 0.0
    for p in params:
        b = p.beta
        if chi == 0.0:
            total += (
                2.0 ** (U - 1)
                / (U * LN2)
                * (
                    a * _two_pole_integral(b, a, H)
                    - 0.5 * a * _two_pole_integral(2.0 * b, a, 2.0 * H)
                )
            )
            continue
        chik = min(chi, 1.0 - CHI_ONE_NUDGE)
        total += (
            2.0 ** (U - 1) * a ** (U + 1) / (U * LN2)
            * (
                psi_fn(a, chik * b, b, H, U) / (1 - chik)
                - chik * psi_fn(a, b, b / chik, H / chik, U) / (1 - chik)
                - chik**2 * psi_fn(a, 2 * b, 2 * b / chik, 2 * H / chik, U)
                / (2 * (1 - chik) ** 2)
                - psi_fn(a, 2 * chik * b, 2 * b, 2 * H, U) / (2 * (1 - chik) ** 2)
                + chik * psi_fn(
                    a, (1 + chik) * b, (1 + chik) * b / chik, (1 + chik) * H / chik, U
                ) / (1 - chik) ** 2
            )
        )
    return total


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------

def oracle_outage_by_gain_sampling(
    scheme: str,
    message: str,
    p: AnalyticParams,
    n_draws: int,
    rng: np.random.Generator,
) -> MetricEstimate:
    """Estimate an outage probability by sampling the approximating gain model.

    scheme in {pmux, pdiv, spmux}, message in {common, private}.  This is the
    independent brute-force oracle for the six closed forms.
    """
    scale = p.zeta / p.phi
    sig2 = 1.0 / p.rho
    U = p.num_users
    if scheme == "pmux" and message == "common":
        gain = rng.exponential(scale * p.alpha, n_draws)
        interf = rng.gamma(U, scale * p.chi * p.beta, n_draws) if p.chi > 0 else 0.0
        tau = p.tau_c
    elif scheme == "pmux" and message == "private":
        gain = rng.exponential(scale * p.beta, n_draws)
        interf = rng.exponential(scale * p.chi * p.alpha, n_draws) if p.chi > 0 else 0.0
        tau = p.tau_p
    elif scheme == "pdiv" and message == "common":
        g2 = scale * p.alpha * (
            rng.exponential(1.0, (n_draws, 2))
            + p.chi * rng.exponential(1.0, (n_draws, 2))
        )
        gain = g2.max(axis=1)
        interf = rng.exponential(scale * p.beta, n_draws)
        if p.chi > 0:
            interf = interf + rng.gamma(U, scale * p.chi * p.beta, n_draws)
        tau = p.tau_c
    elif scheme == "pdiv" and message == "private":
        g2 = scale * p.beta * (
            rng.exponential(1.0, (n_draws, 2))
            + p.chi * rng.exponential(1.0, (n_draws, 2))
        )
        gain = g2.max(axis=1)
        interf = scale * p.xi * p.alpha * (
            rng.exponential(1.0, n_draws) + p.chi * rng.exponential(1.0, n_draws)
        )
        if p.chi > 0:
            interf = interf + rng.gamma(U - 1, scale * p.chi * p.beta, n_draws)
        tau = p.tau_p
    elif scheme == "spmux" and message == "common":
        gain = rng.exponential(scale * p.alpha, n_draws)
        interf = rng.exponential(scale * p.beta, n_draws)
        if p.chi > 0:
            interf = interf + rng.exponential(scale * p.chi * p.alpha, n_draws)
            interf = interf + rng.gamma(U, scale * p.chi * p.beta, n_draws)
        tau = p.tau_c
    elif scheme == "spmux" and message == "private":
        gain = rng.exponential(scale * p.beta, n_draws)
        interf = rng.exponential(scale * p.xi * p.alpha, n_draws) if p.xi > 0 else 0.0
        if p.chi > 0:
            interf = interf + rng.exponential(scale * p.chi * p.alpha, n_draws)
            interf = interf + rng.gamma(U, scale * p.chi * p.beta, n_draws)
        tau = p.tau_p
    else:
        raise ValueError(f"unknown oracle target {scheme!r}/{message!r}")

    hits = gain < tau * (interf + sig2)
    value = float(np.mean(hits))
    se = math.sqrt(max(value * (1.0 - value), 1e-300) / n_draws)
    return MetricEstimate(
        value=value, std_error=se, trials=n_draws, metric=f"outage_{message}"
    )


def oracle_ergodic_by_cdf_quadrature(survival, name: str = "rate") -> float:
    """∫_0^∞ survival(z) / ((1+z) ln 2) dz by adaptive quadrature.

    `survival` maps z to Pr{SINR > z}; absolute tolerance 1e-8 with failure
    raised as NumericalConsistencyError.
    """
    val, abserr = quad(
        lambda z: survival(z) / ((1.0 + z) * LN2), 0.0, np.inf, limit=800,
        epsabs=1e-10, epsrel=1e-10,
    )
    if abserr > 1e-6 * max(1.0, abs(val)):
        raise NumericalConsistencyError(
            f"CDF quadrature for {name} did not converge (abserr={abserr})"
        )
    return val
