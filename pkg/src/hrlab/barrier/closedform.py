"""Finite sums  sum_i c_i r**lam_i (ln r)**k_i  with k_i in {0, 1}.

The set is closed under d/dr, the radial Laplacian and L_mu = Delta^2 - mu r^-4,
so identities such as L_mu H = 0 can be checked coefficient by coefficient
instead of by sampling.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ..spectral import eval_M, eval_M_prime, eval_P, eval_P_prime


@dataclass(frozen=True)
class Term:
    coeff: float
    lam: float
    logpow: int = 0


class RadialClosedForm:
    def __init__(self, terms):
        ts = []
        for t in terms:
            if not isinstance(t, Term):
                t = Term(*t)
            if t.logpow not in (0, 1):
                raise ValueError(f"logpow must be 0 or 1, got {t.logpow}")
            ts.append(Term(float(t.coeff), float(t.lam), int(t.logpow)))
        self.terms = tuple(ts)

    def __repr__(self):
        body = " + ".join(
            f"{t.coeff:.6g}*r^{t.lam:.6g}" + ("*ln r" if t.logpow else "") for t in self.terms
        )
        return f"RadialClosedForm({body or '0'})"

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        return RadialClosedForm(self.terms + other.terms)

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: float) -> "RadialClosedForm":
        return RadialClosedForm(Term(c * t.coeff, t.lam, t.logpow) for t in self.terms)

    def __call__(self, r):
        r = np.asarray(r)
        if r.dtype.kind != "f":
            r = r.astype(float)
        lr = np.log(r)
        out = np.zeros_like(r)
        for t in self.terms:
            v = t.coeff * r**t.lam
            if t.logpow:
                v = v * lr
            out = out + v
        return out

    def at_one(self) -> float:
        return sum(t.coeff for t in self.terms if t.logpow == 0)

    def max_abs_coeff(self) -> float:
        return max((abs(t.coeff) for t in self.terms), default=0.0)

    def collect(self, tol: float = 0.0) -> "RadialClosedForm":
        """Merge terms whose exponents agree to ``tol`` and share the log power."""
        merged: list[list] = []
        for t in self.terms:
            for m in merged:
                if m[2] == t.logpow and abs(m[1] - t.lam) <= tol:
                    m[0] += t.coeff
                    break
            else:
                merged.append([t.coeff, t.lam, t.logpow])
        return RadialClosedForm(Term(*m) for m in merged)

    def derivative(self) -> "RadialClosedForm":
        out = []
        for t in self.terms:
            out.append(Term(t.coeff * t.lam, t.lam - 1, t.logpow))
            if t.logpow:
                out.append(Term(t.coeff, t.lam - 1, 0))
        return RadialClosedForm(out)

    def laplacian(self, N: int) -> "RadialClosedForm":
        # Delta(r^lam) = M(lam) r^(lam-2);  Delta(r^lam ln r) adds M'(lam) r^(lam-2)
        out = []
        for t in self.terms:
            out.append(Term(t.coeff * eval_M(t.lam, N), t.lam - 2, t.logpow))
            if t.logpow:
                out.append(Term(t.coeff * eval_M_prime(t.lam, N), t.lam - 2, 0))
        return RadialClosedForm(out)

    def bilaplacian(self, N: int) -> "RadialClosedForm":
        return self.laplacian(N).laplacian(N)

    def hardy_rellich(self, N: int, mu: float) -> "RadialClosedForm":
        """L_mu applied termwise: L_mu(r^lam) = P(lam) r^(lam-4)."""
        out = []
        for t in self.terms:
            out.append(Term(t.coeff * eval_P(t.lam, N, mu), t.lam - 4, t.logpow))
            if t.logpow:
                out.append(Term(t.coeff * eval_P_prime(t.lam, N), t.lam - 4, 0))
        return RadialClosedForm(out)

    def log_abs(self, log_r):
        """(log|f|, sign) evaluated from ln r, usable far beyond float range of r."""
        log_r = np.atleast_1d(np.asarray(log_r, dtype=float))
        if not self.terms:
            return np.full_like(log_r, -np.inf), np.zeros_like(log_r)
        logs = []
        signs = []
        for t in self.terms:
            s = np.sign(t.coeff) * np.ones_like(log_r)
            lg = np.log(abs(t.coeff)) + t.lam * log_r if t.coeff != 0 else np.full_like(log_r, -np.inf)
            if t.logpow:
                with np.errstate(divide="ignore"):
                    lg = lg + np.log(np.abs(log_r))
                s = s * np.sign(log_r)
            logs.append(lg)
            signs.append(s)
        val, sgn = logsumexp(np.array(logs), axis=0, b=np.array(signs), return_sign=True)
        return val, sgn


def apply_Lmu(f: RadialClosedForm, N: int, mu: float) -> RadialClosedForm:
    return f.hardy_rellich(N, mu)


def apply_laplacian(f: RadialClosedForm, N: int) -> RadialClosedForm:
    return f.laplacian(N)


def differentiate(f: RadialClosedForm) -> RadialClosedForm:
    return f.derivative()


def power(lam: float, coeff: float = 1.0, logpow: int = 0) -> RadialClosedForm:
    return RadialClosedForm([Term(coeff, lam, logpow)])
