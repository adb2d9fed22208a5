//! Exact Hodge integrals on moduli spaces of stable curves `M̄_{g,n}` and, through
//! the elliptic-tail correction of the λ classes, on moduli spaces of
//! pseudostable curves.
//!
//! The layers, bottom up:
//!
//! - [`wk`]: ψ intersection numbers and κ–ψ integrals.
//! - [`hodge`]: stable integrals of λ and ψ monomials.
//! - [`taut`]: classes supported on elliptic-tail strata, their products and
//!   integrals, and the pseudostable integrals built from them.
//! - [`hurwitz`]: brute-force Hurwitz numbers checked against linear Hodge integrals.
//!
//! Every value is an exact [`Rational`]; memo tables live in an [`Engine`].

pub mod arith;
pub mod engine;
pub mod error;
pub mod hodge;
pub mod hurwitz;
pub mod moduli;
pub mod poly;
pub mod polynomial;
pub mod taut;
pub mod wk;

pub use arith::{format_rational, Rational};
pub use engine::Engine;
pub use error::{Error, Result};
pub use hodge::{hodge_integral, HodgeMonomial};
pub use polynomial::{stable_integral, HodgePolynomial};
pub use taut::{
    class_integrate, class_multiply, hat_lambda, ps_hodge_integral, t_pullback_ch, Stratum,
    StratumTerm, Tail, TautClass,
};
pub use wk::{kappa_psi_integral, wk_integral, KappaPsiMonomial, WkKey};
