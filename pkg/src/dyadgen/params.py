"""Model parameters shared by the affine (DAPA) and exponential (DORPA) samplers."""

from __future__ import annotations

from dataclasses import dataclass


class ParameterError(ValueError):
    """A parameter violates its documented bound."""


@dataclass(frozen=True)
class ModelParams:
    """Attachment parameters: baseline alpha, damping beta, degree weights theta.

    Bounds (alpha > 0, beta >= 0, 0 <= theta <= 1) guarantee the affine
    edge probability is a genuine probability for every reachable degree
    state, so no clamping is ever applied downstream.
    """

    alpha: float = 1.0
    beta: float = 1.0
    theta_in: float = 0.0
    theta_out: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be > 0, got {self.alpha}")
        if not self.beta >= 0:
            raise ParameterError(f"beta must be >= 0, got {self.beta}")
        if not 0 <= self.theta_in <= 1:
            raise ParameterError(f"theta_in must be in [0, 1], got {self.theta_in}")
        if not 0 <= self.theta_out <= 1:
            raise ParameterError(f"theta_out must be in [0, 1], got {self.theta_out}")

    @property
    def theta_sum(self) -> float:
        return self.theta_in + self.theta_out
