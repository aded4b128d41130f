//! Entanglement entropy of translation-invariant free-fermion states.
//!
//! A quasi-free fermionic state on the cubic lattice Z^d is fixed by its
//! Fermi sea M, a measurable subset of the momentum torus [-pi, pi)^d. The
//! reduced state on the box {1..L}^d has correlation matrix Q_L, the cube
//! restriction of the symbol, and its von Neumann entropy is
//!
//!   S_L = sum_i eta(lambda_i),   eta(x) = -x ln x - (1 - x) ln (1 - x),
//!
//! over the eigenvalues of Q_L. This crate computes S_L exactly at desk
//! scale, evaluates Fejer-kernel lower bounds on the trace functional
//! Tr Q_L (1 - Q_L), and constructs one-dimensional seas whose entropy
//! tracks an arbitrary prescribed sub-volume growth law.
//!
//! Modules, bottom up:
//! - [`fermi_sea`]: sea representations and the translation defect Lambda_M.
//! - [`symbol`]: Fourier coefficients and the restricted matrix Q_L.
//! - [`spectrum`]: eigenvalues, binary entropy, trace purity bound.
//! - [`bounds`]: Fejer kernel, quadrature, and the two bound routes.
//! - [`constructor`]: growth profiles and the exotic-sea builder.
//! - [`cli`]: scan orchestration, serialization, fitting.
//! - [`corpus`]: seeded random seas for cross-crate testing.

pub mod bounds;
pub mod cli;
pub mod constructor;
pub mod corpus;
pub mod fermi_sea;
pub mod spectrum;
pub mod symbol;
pub mod util;
