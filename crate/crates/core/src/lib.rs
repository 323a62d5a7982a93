//! Local structure of zero sets of Dirac-type eigenfields: exact jet algebra,
//! Weierstrass preparation and resultants, spectral operators on flat tori,
//! and numerical nodal-set analysis.

pub mod clifford;
pub mod fields;
pub mod linalg;
pub mod nodal;
pub mod obstruction;
pub mod polyjet;
pub mod resultants;
pub mod scalar;
pub mod univariate;
pub mod weierstrass;

use num_complex::Complex;

pub type Rational = num_rational::BigRational;
pub type Gaussian = Complex<Rational>;

pub type RationalJet = polyjet::Jet<Rational>;
pub type GaussianJet = polyjet::Jet<Gaussian>;
pub type RationalPoly = univariate::UniPoly<Rational>;

pub type GammaRep64 = clifford::GammaRep<f64>;
pub type GammaRep32 = clifford::GammaRep<f32>;
pub type ExactGammaRep = clifford::GammaRep<Rational>;

pub type Grid64 = fields::FlatTorusGrid<f64>;
pub type Grid32 = fields::FlatTorusGrid<f32>;
