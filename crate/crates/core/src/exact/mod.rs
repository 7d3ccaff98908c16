//! Exact arithmetic kernel: big rationals, dense univariate and bivariate
//! polynomials over Q, exact linear algebra, resultants, certified root
//! isolation and rational factorization.

pub mod bipoly;
pub mod factor;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod resultant;
pub mod roots;
