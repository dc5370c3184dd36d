use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{ceil_usize, floor_usize, format_rational, int, parse_rational, to_f64, Rational};

/// The `(θ, α, β)` triple defining a self-determined community.
///
/// `θ` scales how many members each voter may vote for (`⌈θ|S|⌉`), `α` is
/// the fraction of `S` every insider must be voted by, and `β` bounds the
/// fraction any outsider may collect. Invariant: `θ > 0` and
/// `0 ≤ β < α ≤ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommunityParams {
    theta: Rational,
    alpha: Rational,
    beta: Rational,
}

impl CommunityParams {
    pub fn new(theta: Rational, alpha: Rational, beta: Rational) -> Result<Self> {
        if !theta.is_positive() {
            return Err(Error::invalid(format!("theta must be positive, got {theta}")));
        }
        if alpha > Rational::one() || !alpha.is_positive() {
            return Err(Error::invalid(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if beta.is_negative() || beta >= alpha {
            return Err(Error::invalid(format!(
                "beta must satisfy 0 <= beta < alpha, got beta={beta} alpha={alpha}"
            )));
        }
        Ok(CommunityParams { theta, alpha, beta })
    }

    /// Parses each component with [`parse_rational`].
    pub fn parse(theta: &str, alpha: &str, beta: &str) -> Result<Self> {
        Self::new(parse_rational(theta)?, parse_rational(alpha)?, parse_rational(beta)?)
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// `γ = α − β`.
    pub fn gamma(&self) -> Rational {
        &self.alpha - &self.beta
    }

    pub fn theta_f64(&self) -> f64 {
        to_f64(&self.theta)
    }

    pub fn alpha_f64(&self) -> f64 {
        to_f64(&self.alpha)
    }

    pub fn beta_f64(&self) -> f64 {
        to_f64(&self.beta)
    }

    pub fn gamma_f64(&self) -> f64 {
        to_f64(&self.gamma())
    }

    /// Ranked prefix length `⌈θ t⌉` for a community of size `t`.
    pub fn prefix_len(&self, size: usize) -> usize {
        prefix_len(&self.theta, size)
    }

    /// Weighted vote budget `θ t` (no rounding).
    pub fn vote_cap(&self, size: usize) -> Rational {
        &self.theta * int(size)
    }

    /// Smallest integer vote count meeting the inside threshold `α t`.
    pub fn min_inside_votes(&self, size: usize) -> usize {
        ceil_usize(&(&self.alpha * int(size)))
    }

    /// Largest integer vote count meeting the outside threshold `β t`.
    pub fn max_outside_votes(&self, size: usize) -> usize {
        floor_usize(&(&self.beta * int(size)))
    }

    /// The purification cut `α − γ/2`.
    pub fn purification_fraction(&self) -> Rational {
        &self.alpha - self.gamma() / int(2)
    }

    /// `(θ, α − a, β + b)`, validated.
    pub fn shifted(&self, alpha_down: &Rational, beta_up: &Rational) -> Result<Self> {
        let beta = &self.beta + beta_up;
        let beta = if beta.is_negative() { Rational::zero() } else { beta };
        Self::new(self.theta.clone(), &self.alpha - alpha_down, beta)
    }

    pub fn with_theta(&self, theta: Rational) -> Result<Self> {
        Self::new(theta, self.alpha.clone(), self.beta.clone())
    }
}

pub(crate) fn prefix_len(theta: &Rational, size: usize) -> usize {
    ceil_usize(&(theta * int(size)))
}

impl fmt::Display for CommunityParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "theta={} alpha={} beta={}",
            format_rational(&self.theta),
            format_rational(&self.alpha),
            format_rational(&self.beta)
        )
    }
}
