//! Sign-restriction identification of monetary-policy and information
//! shocks from two-asset announcement surprises.
//!
//! Candidate impact matrices are A(θ) = C·R(θ), with C the lower Cholesky
//! factor of the surprise covariance and R(θ) a rotation. An angle is
//! admissible when a policy shock raises rates and lowers equities while an
//! information shock raises both; identification picks the circular median
//! of the admissible arc, a uniform draw from it, or falls back to the
//! sign-of-comovement split.

use crate::dataio::EventSurprises;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, domain, stream_rng};
use chrono::NaiveDate;
use nalgebra::{Matrix2, Vector2};
use rand::Rng;
use std::f64::consts::PI;

/// Grid resolution used by the angle search.
pub const DEFAULT_N_ANGLES: usize = 999;

/// Equally spaced angles on [−π, π).
#[derive(Debug, Clone)]
pub struct RotationGrid {
    angles: Vec<f64>,
}

impl RotationGrid {
    pub fn new(n_angles: usize) -> Result<Self> {
        if n_angles < 2 {
            return Err(Error::InvalidSpec(format!(
                "rotation grid needs at least 2 angles, got {n_angles}"
            )));
        }
        let step = 2.0 * PI / n_angles as f64;
        let angles = (0..n_angles).map(|i| -PI + i as f64 * step).collect();
        Ok(RotationGrid { angles })
    }

    pub fn n(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn angle(&self, i: usize) -> f64 {
        self.angles[i]
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.angles.len() as f64
    }
}

impl Default for RotationGrid {
    fn default() -> Self {
        RotationGrid::new(DEFAULT_N_ANGLES).expect("default grid size is valid")
    }
}

/// R(θ) = [[cosθ, −sinθ], [sinθ, cosθ]].
pub fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Demeaned sample covariance of (ir, eq) with divisor T−1.
pub fn sample_covariance(events: &EventSurprises) -> Result<Matrix2<f64>> {
    let n = events.len();
    if n < 2 {
        return Err(Error::TooFewEvents(n));
    }
    let mean = surprise_mean(events);
    let mut s = Matrix2::zeros();
    for e in events.events() {
        let d = Vector2::new(e.ir, e.eq) - mean;
        s += d * d.transpose();
    }
    s /= (n - 1) as f64;
    if s[(0, 0)] <= 0.0 {
        return Err(Error::ZeroVariance { column: "ir".into() });
    }
    if s[(1, 1)] <= 0.0 {
        return Err(Error::ZeroVariance { column: "eq".into() });
    }
    Ok(s)
}

fn surprise_mean(events: &EventSurprises) -> Vector2<f64> {
    let n = events.len() as f64;
    let mut m = Vector2::zeros();
    for e in events.events() {
        m += Vector2::new(e.ir, e.eq);
    }
    m / n
}

/// Closed-form lower Cholesky factor of a 2×2 SPD matrix.
pub fn cholesky2(s: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let scale = 1.0 + s.amax();
    if (s[(0, 1)] - s[(1, 0)]).abs() > 1e-12 * scale {
        return Err(Error::NotSpd {
            reason: format!("asymmetric: s12={} vs s21={}", s[(0, 1)], s[(1, 0)]),
        });
    }
    let s11 = s[(0, 0)];
    let det = s11 * s[(1, 1)] - s[(0, 1)] * s[(1, 0)];
    if s11 <= 0.0 || det <= 0.0 {
        return Err(Error::NotSpd {
            reason: format!("s11={s11}, det={det}"),
        });
    }
    let c11 = s11.sqrt();
    let c21 = s[(1, 0)] / c11;
    let c22 = (s[(1, 1)] - c21 * c21).sqrt();
    Ok(Matrix2::new(c11, 0.0, c21, c22))
}

/// Strict sign pattern of an admissible impact matrix: policy shock (col 1)
/// raises rates and lowers equities; information shock (col 2) raises both.
fn satisfies_signs(a: &Matrix2<f64>) -> bool {
    a[(0, 0)] > 0.0 && a[(1, 0)] < 0.0 && a[(0, 1)] > 0.0 && a[(1, 1)] > 0.0
}

/// Grid angles passing the sign restrictions, as indices into the grid.
#[derive(Debug, Clone)]
pub struct AdmissibleSet {
    grid: RotationGrid,
    indices: Vec<usize>,
}

impl AdmissibleSet {
    /// Builds a set from explicit grid indices (sorted, in range, unique).
    pub fn new(grid: RotationGrid, indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpec("admissible indices must be strictly increasing".into()));
        }
        if indices.last().is_some_and(|&i| i >= grid.n()) {
            return Err(Error::InvalidSpec("admissible index out of grid range".into()));
        }
        Ok(AdmissibleSet { grid, indices })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn grid(&self) -> &RotationGrid {
        &self.grid
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Angles in increasing order.
    pub fn angles(&self) -> Vec<f64> {
        self.indices.iter().map(|&i| self.grid.angle(i)).collect()
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.indices.iter().any(|&i| self.grid.angle(i) == theta)
    }

    /// Indices walked along the circle from the arc's start, unwrapping a
    /// set that straddles the ±π seam. Errors when the set is not a single
    /// contiguous arc.
    fn circular_order(&self) -> Result<Vec<usize>> {
        let m = self.indices.len();
        if m == 0 {
            return Err(Error::EmptyAdmissibleSet);
        }
        let n = self.grid.n();
        // A break is a circular gap of more than one grid step between
        // consecutive members. A contiguous arc has exactly one break
        // (where the circle leaves the arc), unless it covers the full grid.
        let mut breaks = Vec::new();
        for j in 0..m {
            let here = self.indices[j];
            let next = self.indices[(j + 1) % m];
            let gap = (next + n - here) % n;
            if gap != 1 {
                breaks.push(j);
            }
        }
        match breaks.len() {
            0 => Ok(self.indices.clone()),
            1 => {
                let start = (breaks[0] + 1) % m;
                Ok((0..m).map(|j| self.indices[(start + j) % m]).collect())
            }
            _ => Err(Error::NonContiguousAdmissibleSet),
        }
    }
}

/// Evaluates the four sign restrictions at every grid angle.
pub fn admissible_angles(c: &Matrix2<f64>, grid: &RotationGrid) -> Result<AdmissibleSet> {
    let indices: Vec<usize> = (0..grid.n())
        .filter(|&i| satisfies_signs(&(c * rotation(grid.angle(i)))))
        .collect();
    if indices.is_empty() {
        return Err(Error::EmptyAdmissibleSet);
    }
    AdmissibleSet::new(grid.clone(), indices)
}

/// Circular median of a contiguous admissible arc: the middle element in
/// arc order, taking the lower of the two middles for even counts.
pub fn median_rotation(admissible: &AdmissibleSet) -> Result<f64> {
    let order = admissible.circular_order()?;
    Ok(admissible.grid.angle(order[(order.len() - 1) / 2]))
}

/// Uniform draws with replacement from the discrete admissible set.
pub fn draw_admissible(admissible: &AdmissibleSet, n: usize, seed: u64) -> Result<Vec<f64>> {
    if admissible.is_empty() {
        return Err(Error::EmptyAdmissibleSet);
    }
    let mut rng = stream_rng(derive_seed(seed, domain::ROTATION_DRAWS), 0);
    Ok((0..n)
        .map(|_| admissible.grid.angle(admissible.indices[rng.gen_range(0..admissible.len())]))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockMethod {
    MedianRotation,
    UniformDraw,
    FixedRotation,
    PoorMans,
}

impl ShockMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ShockMethod::MedianRotation => "median_rotation",
            ShockMethod::UniformDraw => "uniform_draw",
            ShockMethod::FixedRotation => "fixed_rotation",
            ShockMethod::PoorMans => "poor_mans",
        }
    }
}

/// Event-frequency structural shock pair with its provenance.
#[derive(Debug, Clone)]
pub struct ShockSeries {
    pub dates: Vec<NaiveDate>,
    pub mp: Vec<f64>,
    pub info: Vec<f64>,
    pub method: ShockMethod,
    /// Chosen rotation angle; absent for the comovement split.
    pub theta_star: Option<f64>,
}

/// Full rotation-method state for reporting.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub covariance: Matrix2<f64>,
    pub chol: Matrix2<f64>,
    pub admissible: AdmissibleSet,
    pub theta_star: f64,
    pub method: ShockMethod,
}

/// Inverts the impact map at θ: u_t = R(θ)ᵀ·C⁻¹·(m_t − mean).
///
/// The resulting mp/info series have unit sample variance and zero sample
/// correlation by construction. θ must satisfy the sign restrictions for
/// these events' C.
pub fn decompose(events: &EventSurprises, theta: f64, method: ShockMethod) -> Result<ShockSeries> {
    let s = sample_covariance(events)?;
    let c = cholesky2(&s)?;
    if !satisfies_signs(&(c * rotation(theta))) {
        return Err(Error::AngleNotAdmissible { angle: theta });
    }
    let c_inv = Matrix2::new(
        1.0 / c[(0, 0)],
        0.0,
        -c[(1, 0)] / (c[(0, 0)] * c[(1, 1)]),
        1.0 / c[(1, 1)],
    );
    let map = rotation(theta).transpose() * c_inv;
    let mean = surprise_mean(events);
    let mut mp = Vec::with_capacity(events.len());
    let mut info = Vec::with_capacity(events.len());
    for e in events.events() {
        let u = map * (Vector2::new(e.ir, e.eq) - mean);
        mp.push(u[0]);
        info.push(u[1]);
    }
    Ok(ShockSeries {
        dates: events.dates(),
        mp,
        info,
        method,
        theta_star: Some(theta),
    })
}

/// Median-rotation identification end to end.
pub fn identify_median(
    events: &EventSurprises,
    grid: &RotationGrid,
) -> Result<(Decomposition, ShockSeries)> {
    let covariance = sample_covariance(events)?;
    let chol = cholesky2(&covariance)?;
    let admissible = admissible_angles(&chol, grid)?;
    let theta_star = median_rotation(&admissible)?;
    let shocks = decompose(events, theta_star, ShockMethod::MedianRotation)?;
    Ok((
        Decomposition {
            covariance,
            chol,
            admissible,
            theta_star,
            method: ShockMethod::MedianRotation,
        },
        shocks,
    ))
}

/// Comovement split: opposite-signed surprises are a policy shock, same-
/// signed an information shock, zero products neither. The assigned
/// magnitude is the interest-rate surprise.
pub fn poor_mans_split(events: &EventSurprises) -> ShockSeries {
    let mut mp = Vec::with_capacity(events.len());
    let mut info = Vec::with_capacity(events.len());
    for e in events.events() {
        let product = e.ir * e.eq;
        if product < 0.0 {
            mp.push(e.ir);
            info.push(0.0);
        } else if product > 0.0 {
            mp.push(0.0);
            info.push(e.ir);
        } else {
            mp.push(0.0);
            info.push(0.0);
        }
    }
    ShockSeries {
        dates: events.dates(),
        mp,
        info,
        method: ShockMethod::PoorMans,
        theta_star: None,
    }
}

/// CSV report pairing raw surprises with their decomposition:
/// `date,ir,eq,mp,info,method,theta_star` (θ* blank for the comovement split).
pub fn shock_report_csv(events: &EventSurprises, shocks: &ShockSeries) -> String {
    assert_eq!(events.len(), shocks.mp.len());
    let theta = shocks.theta_star.map(|t| t.to_string()).unwrap_or_default();
    let mut out = String::from("date,ir,eq,mp,info,method,theta_star\n");
    for (i, e) in events.events().iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.date,
            e.ir,
            e.eq,
            shocks.mp[i],
            shocks.info[i],
            shocks.method.as_str(),
            theta
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::SurpriseEvent;
    use approx::assert_relative_eq;

    fn events_from(vals: &[(f64, f64)]) -> EventSurprises {
        let events = vals
            .iter()
            .enumerate()
            .map(|(i, &(ir, eq))| SurpriseEvent {
                date: NaiveDate::from_ymd_opt(2004, 1, 1).unwrap() + chrono::Days::new(i as u64),
                ir,
                eq,
            })
            .collect();
        EventSurprises::new(events).unwrap()
    }

    /// Four points with exactly unit sample covariance (divisor 3).
    fn identity_cov_events() -> EventSurprises {
        let a = (1.5f64).sqrt();
        events_from(&[(a, 0.0), (-a, 0.0), (0.0, a), (0.0, -a)])
    }

    #[test]
    fn grid_spacing_and_bounds() {
        let grid = RotationGrid::default();
        assert_eq!(grid.n(), 999);
        assert_relative_eq!(grid.angle(0), -PI);
        assert!(grid.angles().last().unwrap() < &PI);
        for w in grid.angles().windows(2) {
            assert_relative_eq!(w[1] - w[0], 2.0 * PI / 999.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn covariance_hand_oracles() {
        let s = sample_covariance(&events_from(&[(1.0, 1.0), (-1.0, -1.0)])).unwrap();
        assert_eq!(s, Matrix2::new(2.0, 2.0, 2.0, 2.0));
        // Singular but not zero-variance: flagged downstream, not here.
        assert!(matches!(cholesky2(&s), Err(Error::NotSpd { .. })));

        let s = sample_covariance(&events_from(&[(2.0, 1.0), (0.0, -1.0), (-2.0, 0.0)])).unwrap();
        assert_eq!(s, Matrix2::new(4.0, 1.0, 1.0, 1.0));

        assert!(matches!(
            sample_covariance(&events_from(&[(1.0, 0.0), (-1.0, 0.0)])),
            Err(Error::ZeroVariance { .. })
        ));
        assert!(matches!(
            sample_covariance(&events_from(&[(1.0, 1.0)])),
            Err(Error::TooFewEvents(1))
        ));
    }

    #[test]
    fn cholesky2_hand_oracles() {
        assert_eq!(cholesky2(&Matrix2::identity()).unwrap(), Matrix2::identity());
        let c = cholesky2(&Matrix2::new(4.0, 2.0, 2.0, 5.0)).unwrap();
        assert_eq!(c, Matrix2::new(2.0, 0.0, 1.0, 2.0));
        assert_relative_eq!((c * c.transpose() - Matrix2::new(4.0, 2.0, 2.0, 5.0)).amax(), 0.0);
        assert!(matches!(
            cholesky2(&Matrix2::new(1.0, 1.0, 1.0, 1.0)),
            Err(Error::NotSpd { .. })
        ));
    }

    #[test]
    fn identity_arc_is_the_fourth_quadrant() {
        let grid = RotationGrid::default();
        let adm = admissible_angles(&Matrix2::identity(), &grid).unwrap();
        // Brute-force arc for the identity: all grid points in (−π/2, 0).
        let expect: Vec<usize> = (0..grid.n())
            .filter(|&i| grid.angle(i) > -PI / 2.0 && grid.angle(i) < 0.0)
            .collect();
        assert_eq!(adm.indices(), expect.as_slice());
        assert_eq!(adm.indices(), (250..=499).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn identity_median_is_near_minus_quarter_pi() {
        let grid = RotationGrid::default();
        let adm = admissible_angles(&Matrix2::identity(), &grid).unwrap();
        let theta = median_rotation(&adm).unwrap();
        // 250 members: middles at positions 124/125, lower one is index 374.
        assert_eq!(theta, grid.angle(374));
        assert!((theta - (-PI / 4.0)).abs() < grid.spacing());
    }

    #[test]
    fn correlated_arc_matches_grid_oracle() {
        let grid = RotationGrid::default();
        let c = Matrix2::new(1.0, 0.0, 0.9, 0.19f64.sqrt());
        let adm = admissible_angles(&c, &grid).unwrap();
        assert_eq!(adm.indices(), (250..=321).collect::<Vec<_>>().as_slice());
        let theta = median_rotation(&adm).unwrap();
        assert_eq!(theta, grid.angle(285));
        assert!((theta - (-1.3461)).abs() < grid.spacing());
    }

    #[test]
    fn admitted_angles_pass_a_direct_recheck() {
        let grid = RotationGrid::default();
        let c = Matrix2::new(1.0, 0.0, -5.0, 0.1);
        let adm = admissible_angles(&c, &grid).unwrap();
        assert!(!adm.is_empty());
        for theta in adm.angles() {
            let a = c * rotation(theta);
            assert!(a[(0, 0)] > 0.0 && a[(1, 0)] < 0.0 && a[(0, 1)] > 0.0 && a[(1, 1)] > 0.0);
        }
    }

    #[test]
    fn median_of_singleton_is_that_angle() {
        let grid = RotationGrid::default();
        let adm = AdmissibleSet::new(grid.clone(), vec![700]).unwrap();
        assert_eq!(median_rotation(&adm).unwrap(), grid.angle(700));
    }

    #[test]
    fn median_unwraps_an_arc_across_the_seam() {
        // {997, 998, 0, 1, 2} is contiguous on the circle; middle is 0.
        let grid = RotationGrid::default();
        let adm = AdmissibleSet::new(grid.clone(), vec![0, 1, 2, 997, 998]).unwrap();
        assert_eq!(median_rotation(&adm).unwrap(), grid.angle(0));
    }

    #[test]
    fn scattered_set_is_rejected() {
        let grid = RotationGrid::default();
        let adm = AdmissibleSet::new(grid, vec![10, 11, 500]).unwrap();
        assert!(matches!(
            median_rotation(&adm),
            Err(Error::NonContiguousAdmissibleSet)
        ));
    }

    #[test]
    fn decompose_at_quarter_pi_matches_hand_map() {
        let events = identity_cov_events();
        let shocks = decompose(&events, -PI / 4.0, ShockMethod::MedianRotation).unwrap();
        let root_half = 0.5f64.sqrt();
        for (i, e) in events.events().iter().enumerate() {
            assert_relative_eq!(shocks.mp[i], (e.ir - e.eq) * root_half, epsilon = 1e-12);
            assert_relative_eq!(shocks.info[i], (e.ir + e.eq) * root_half, epsilon = 1e-12);
        }
    }

    #[test]
    fn synthesis_then_inversion_recovers_the_structural_shocks() {
        // Unit-variance orthogonal shocks, mapped through a known C and the
        // arc median, must be recovered by decomposing the mapped surprises.
        let a = (1.5f64).sqrt();
        let u: Vec<Vector2<f64>> = vec![
            Vector2::new(a, 0.0),
            Vector2::new(-a, 0.0),
            Vector2::new(0.0, a),
            Vector2::new(0.0, -a),
        ];
        let c0 = Matrix2::new(1.2, 0.0, -0.4, 0.8);
        let grid = RotationGrid::default();
        let theta0 = median_rotation(&admissible_angles(&c0, &grid).unwrap()).unwrap();
        let map = c0 * rotation(theta0);
        let mu = Vector2::new(0.7, -0.2);
        let vals: Vec<(f64, f64)> = u
            .iter()
            .map(|ui| {
                let m = map * ui + mu;
                (m[0], m[1])
            })
            .collect();
        let events = events_from(&vals);
        let shocks = decompose(&events, theta0, ShockMethod::MedianRotation).unwrap();
        for (i, want) in u.iter().enumerate() {
            assert_relative_eq!(shocks.mp[i], want[0], epsilon = 1e-8);
            assert_relative_eq!(shocks.info[i], want[1], epsilon = 1e-8);
        }
    }

    #[test]
    fn decomposed_shocks_are_standardized_and_reconstruct() {
        let events = events_from(&[
            (5.2, -0.3),
            (-1.4, 0.8),
            (2.0, -1.1),
            (0.3, 0.4),
            (-3.8, 1.9),
            (1.1, -0.2),
            (-0.6, -0.5),
            (2.4, 0.9),
        ]);
        let (dec, shocks) = identify_median(&events, &RotationGrid::default()).unwrap();
        let n = events.len() as f64;
        let var = |xs: &[f64]| xs.iter().map(|x| x * x).sum::<f64>() / (n - 1.0);
        let mean_mp: f64 = shocks.mp.iter().sum::<f64>() / n;
        assert_relative_eq!(mean_mp, 0.0, epsilon = 1e-12);
        assert_relative_eq!(var(&shocks.mp), 1.0, epsilon = 1e-8);
        assert_relative_eq!(var(&shocks.info), 1.0, epsilon = 1e-8);
        let cross: f64 = shocks.mp.iter().zip(&shocks.info).map(|(a, b)| a * b).sum();
        assert_relative_eq!(cross / (n - 1.0), 0.0, epsilon = 1e-8);

        // Reconstruction: C·R(θ)·u + mean = m.
        let map = dec.chol * rotation(dec.theta_star);
        let mean = surprise_mean(&events);
        for (i, e) in events.events().iter().enumerate() {
            let m = map * Vector2::new(shocks.mp[i], shocks.info[i]) + mean;
            assert!((m[0] - e.ir).abs() <= 1e-10 && (m[1] - e.eq).abs() <= 1e-10);
        }
        // And C·Cᵀ reproduces the covariance entrywise.
        assert!((dec.chol * dec.chol.transpose() - dec.covariance).amax() <= 1e-12);
    }

    #[test]
    fn inadmissible_angle_is_rejected() {
        let events = identity_cov_events();
        // θ = +π/4 flips the equity response sign for the identity C.
        assert!(matches!(
            decompose(&events, PI / 4.0, ShockMethod::UniformDraw),
            Err(Error::AngleNotAdmissible { .. })
        ));
    }

    #[test]
    fn comovement_split_branches() {
        let events = events_from(&[(5.0, -0.3), (5.0, 0.3), (0.0, 0.2)]);
        let shocks = poor_mans_split(&events);
        assert_eq!(shocks.mp, vec![5.0, 0.0, 0.0]);
        assert_eq!(shocks.info, vec![0.0, 5.0, 0.0]);
        assert_eq!(shocks.theta_star, None);
    }

    #[test]
    fn draws_from_singleton_repeat_it() {
        let grid = RotationGrid::default();
        let adm = AdmissibleSet::new(grid.clone(), vec![42]).unwrap();
        let draws = draw_admissible(&adm, 5, 7).unwrap();
        assert_eq!(draws, vec![grid.angle(42); 5]);
    }

    #[test]
    fn draws_are_seed_reproducible_and_near_uniform() {
        let grid = RotationGrid::default();
        let adm = AdmissibleSet::new(grid, (100..200).collect()).unwrap();
        let a = draw_admissible(&adm, 1000, 11).unwrap();
        let b = draw_admissible(&adm, 1000, 11).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, draw_admissible(&adm, 1000, 12).unwrap());

        let draws = draw_admissible(&adm, 100_000, 3).unwrap();
        let angles = adm.angles();
        for target in angles.iter().step_by(9) {
            let freq =
                draws.iter().filter(|&&d| d == *target).count() as f64 / draws.len() as f64;
            assert!((freq - 0.01).abs() < 0.005, "freq {freq} for {target}");
        }
    }

    #[test]
    fn report_csv_lists_every_event() {
        let events = events_from(&[(5.0, -0.3), (-1.0, 0.5), (2.0, -0.7), (0.5, 1.0)]);
        let (_, shocks) = identify_median(&events, &RotationGrid::default()).unwrap();
        let csv = shock_report_csv(&events, &shocks);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "date,ir,eq,mp,info,method,theta_star");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("2004-01-01,5,-0.3,"));
        assert!(lines[1].contains("median_rotation"));

        let pm = shock_report_csv(&events, &poor_mans_split(&events));
        assert!(pm.lines().nth(1).unwrap().ends_with("poor_mans,"));
    }
}
