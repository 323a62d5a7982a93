//! Randomized checks of the flat operator identities.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{czero, norm, FieldError, FlatTorusGrid, FormField, ScalarField, SpinorField, Values};
use crate::clifford::build_gamma;
use crate::scalar::Real;

/// `count` random fields whose Fourier coefficients are supported on
/// `|m|∞ ≤ band`, normalized jointly to unit `L²` norm.
pub fn random_band_limited<T: Real>(grid: &FlatTorusGrid<T>, count: usize, band: usize, rng: &mut impl Rng) -> Vec<Values<T>> {
    let inside: Vec<bool> = (0..grid.len())
        .map(|k| {
            2 * band < grid.resolution()
                && grid.multi_index(k).iter().all(|&i| 2 * i != grid.resolution() && grid.mode(i).unsigned_abs() as usize <= band)
        })
        .collect();
    let mut comps: Vec<Values<T>> = (0..count)
        .map(|_| {
            let hat: Values<T> = inside
                .iter()
                .map(|&keep| {
                    if keep {
                        Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)))
                    } else {
                        czero()
                    }
                })
                .collect();
            grid.inverse(&hat)
        })
        .collect();
    let len = norm(grid, &comps);
    if len > T::zero() {
        comps.iter_mut().for_each(|c| c.iter_mut().for_each(|v| *v = v.unscale(len)));
    }
    comps
}

/// Worst residuals over all instances (relative unless stated otherwise).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IdentityReport {
    pub n: usize,
    pub resolution: usize,
    pub instances: usize,
    /// `‖D(fs) − fDs − ∇f·s‖ / ‖s‖`.
    pub leibniz: f64,
    /// `‖D²s − ∇*∇s‖ / ‖s‖` (the curvature term is zero on a flat torus).
    pub weitzenbock: f64,
    /// `|⟨Ds₁, s₂⟩ − ⟨s₁, Ds₂⟩|` for unit-norm `s₁, s₂`.
    pub green: f64,
    /// `|⟨(d+δ)ω₁, ω₂⟩ − ⟨ω₁, (d+δ)ω₂⟩|` for unit-norm forms.
    pub green_forms: f64,
    /// `|⟨Δω, ω⟩ − ‖(d+δ)ω‖²| / ‖(d+δ)ω‖²`.
    pub laplace_energy: f64,
    /// `‖(d+δ)²ω − Δω‖ / ‖ω‖`, first instance only.
    pub square_is_laplace: f64,
    /// `max(‖d²ω‖, ‖δ²ω‖) / ‖ω‖`, first instance only.
    pub nilpotency: f64,
    /// `‖F⁻¹Fs − s‖ / ‖s‖`.
    pub round_trip: f64,
}

impl IdentityReport {
    fn absorb(&mut self, other: &Self) {
        let pairs = [
            (&mut self.leibniz, other.leibniz),
            (&mut self.weitzenbock, other.weitzenbock),
            (&mut self.green, other.green),
            (&mut self.green_forms, other.green_forms),
            (&mut self.laplace_energy, other.laplace_energy),
            (&mut self.square_is_laplace, other.square_is_laplace),
            (&mut self.nilpotency, other.nilpotency),
            (&mut self.round_trip, other.round_trip),
        ];
        for (mine, theirs) in pairs {
            *mine = mine.max(theirs);
        }
    }
}

/// Runs the Leibniz, Weitzenböck, Green and `Δ = (d+δ)²` checks on
/// `instances` seeded random band-limited fields over `Tⁿ`.
///
/// The bands are kept below a quarter of the resolution so that products
/// such as `f·s` are still resolved (no aliasing).
pub fn operator_identity_suite<T: Real>(
    n: usize,
    resolution: usize,
    instances: usize,
    seed: u64,
) -> Result<IdentityReport, FieldError> {
    let grid = FlatTorusGrid::<T>::new(n, resolution)?;
    let rep = build_gamma::<T>(n).map_err(|_| FieldError::Dimension(n))?;
    let band = (resolution / 8).clamp(1, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = IdentityReport { n, resolution, instances, ..Default::default() };
    let f64_of = |x: T| x.to_f64_lossy();
    for i in 0..instances {
        let f = ScalarField::new(grid.clone(), random_band_limited(&grid, 1, band, &mut rng).remove(0))?;
        let s = SpinorField::new(grid.clone(), rep.clone(), random_band_limited(&grid, rep.rank(), band, &mut rng))?;
        let s2 = SpinorField::new(grid.clone(), rep.clone(), random_band_limited(&grid, rep.rank(), band, &mut rng))?;
        let w = FormField::new(grid.clone(), random_band_limited(&grid, 1 << n, band, &mut rng))?;
        let w2 = FormField::new(grid.clone(), random_band_limited(&grid, 1 << n, band, &mut rng))?;

        let ds = s.dirac();
        let leibniz = s.multiply(&f).dirac().sub(&ds.multiply(&f)).sub(&s.clifford_multiply(&f.gradient()));
        let weitzenbock = ds.dirac().sub(&s.rough_laplacian());
        let green = ds.inner(&s2) - s.inner(&s2.dirac());

        let dw = w.d_plus_delta();
        let green_forms = dw.inner(&w2) - w.inner(&w2.d_plus_delta());
        let lap = w.laplace();
        let energy = dw.norm() * dw.norm();
        let laplace_energy = (lap.inner(&w) - Complex::new(energy, T::zero())).norm() / energy;
        // The second-order checks are the costliest; one instance suffices.
        let (square, nil) = if i == 0 {
            (
                dw.d_plus_delta().sub(&lap).norm() / w.norm(),
                w.d().d().norm().max(w.delta().delta().norm()) / w.norm(),
            )
        } else {
            (T::zero(), T::zero())
        };

        let one = IdentityReport {
            leibniz: f64_of(leibniz.norm() / s.norm()),
            weitzenbock: f64_of(weitzenbock.norm() / s.norm()),
            green: f64_of(green.norm()),
            green_forms: f64_of(green_forms.norm()),
            laplace_energy: f64_of(laplace_energy),
            square_is_laplace: f64_of(square),
            nilpotency: f64_of(nil),
            round_trip: f64_of(s.round_trip().sub(&s).norm() / s.norm()),
            ..Default::default()
        };
        report.absorb(&one);
    }
    Ok(report)
}
