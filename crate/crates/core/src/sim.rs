//! Synthetic indoor testbed.
//!
//! A rectangular floor with BLE beacons, a log-distance path-loss channel
//! with Gaussian shadowing, and a nearest-fingerprint grid localizer that
//! reports its top-k grid points. All randomness comes from the caller's RNG.

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::baselines::CandidateSet;
use crate::error::{Error, Result};
use crate::location::Location2D;

const MIN_DISTANCE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct Floorplan {
    width: f64,
    height: f64,
    beacons: Vec<Location2D>,
    grid_spacing: f64,
}

impl Floorplan {
    pub fn new(
        width: f64,
        height: f64,
        beacons: Vec<Location2D>,
        grid_spacing: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("width", width),
            ("height", height),
            ("grid spacing", grid_spacing),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "floorplan {name} must be positive, got {v}"
                )));
            }
        }
        let plan = Floorplan {
            width,
            height,
            beacons,
            grid_spacing,
        };
        if let Some(b) = plan.beacons.iter().find(|b| !plan.contains(**b)) {
            return Err(plan.out_of_bounds(*b));
        }
        Ok(plan)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn beacons(&self) -> &[Location2D] {
        &self.beacons
    }

    pub fn grid_spacing(&self) -> f64 {
        self.grid_spacing
    }

    pub fn contains(&self, loc: Location2D) -> bool {
        loc.is_finite()
            && (0.0..=self.width).contains(&loc.x)
            && (0.0..=self.height).contains(&loc.y)
    }

    fn out_of_bounds(&self, loc: Location2D) -> Error {
        Error::OutOfBounds {
            x: loc.x,
            y: loc.y,
            width: self.width,
            height: self.height,
        }
    }

    fn grid_dims(&self) -> (usize, usize) {
        let cols = (self.width / self.grid_spacing + 1e-9).floor() as usize + 1;
        let rows = (self.height / self.grid_spacing + 1e-9).floor() as usize + 1;
        (cols, rows)
    }

    /// Inclusive lattice points in row-major order (y outer, x inner).
    pub fn grid_points(&self) -> Vec<Location2D> {
        let (cols, rows) = self.grid_dims();
        (0..rows)
            .flat_map(|r| {
                (0..cols).map(move |c| {
                    Location2D::new(c as f64 * self.grid_spacing, r as f64 * self.grid_spacing)
                })
            })
            .collect()
    }

    pub fn grid_point_count(&self) -> usize {
        let (cols, rows) = self.grid_dims();
        cols * rows
    }
}

/// 26 m x 17 m floor, ten beacons in two rows of five (one per ~44 m^2),
/// 1 m grid.
pub fn default_floorplan() -> Floorplan {
    let (width, height) = (26.0, 17.0);
    let beacons = (0..2)
        .flat_map(|row| {
            (0..5).map(move |col| {
                Location2D::new(
                    width * (col as f64 + 0.5) / 5.0,
                    height * (row as f64 + 0.5) / 2.0,
                )
            })
        })
        .collect();
    Floorplan::new(width, height, beacons, 1.0).expect("default floorplan is valid")
}

/// Log-distance path-loss channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    /// Received power at 1 m, dBm.
    pub tx_power: f64,
    pub path_loss_exp: f64,
    /// Shadowing standard deviation, dB.
    pub noise_sd: f64,
}

impl Default for Channel {
    fn default() -> Self {
        Channel {
            tx_power: -59.0,
            path_loss_exp: 2.5,
            noise_sd: 4.0,
        }
    }
}

impl Channel {
    pub fn validate(&self) -> Result<()> {
        if !(self.path_loss_exp > 0.0 && self.path_loss_exp.is_finite()) {
            return Err(Error::Config(format!(
                "path loss exponent must be positive, got {}",
                self.path_loss_exp
            )));
        }
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return Err(Error::Config(format!(
                "noise sd must be nonnegative, got {}",
                self.noise_sd
            )));
        }
        if !self.tx_power.is_finite() {
            return Err(Error::Config("tx power must be finite".into()));
        }
        Ok(())
    }

    /// Noise-free received power at `at` from `beacon`.
    pub fn mean_rss(&self, beacon: Location2D, at: Location2D) -> f64 {
        let d = beacon.distance(at).max(MIN_DISTANCE);
        self.tx_power - 10.0 * self.path_loss_exp * d.log10()
    }
}

/// One received power reading, dBm. Always consumes one normal draw so the
/// RNG stream does not depend on `noise_sd`.
pub fn rss_sample<R: Rng + ?Sized>(
    beacon: Location2D,
    at: Location2D,
    channel: &Channel,
    rng: &mut R,
) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    channel.mean_rss(beacon, at) + channel.noise_sd * z
}

/// A scan: one reading per beacon (None when the beacon was not heard).
#[derive(Debug, Clone, PartialEq)]
pub struct RssSample {
    pub readings: Vec<Option<f64>>,
    pub truth: Location2D,
    pub timestamp: f64,
}

impl RssSample {
    pub fn scan<R: Rng + ?Sized>(
        plan: &Floorplan,
        channel: &Channel,
        truth: Location2D,
        timestamp: f64,
        rng: &mut R,
    ) -> Self {
        let readings = plan
            .beacons
            .iter()
            .map(|b| Some(rss_sample(*b, truth, channel, rng)))
            .collect();
        RssSample {
            readings,
            truth,
            timestamp,
        }
    }

    pub fn missing_count(&self) -> usize {
        self.readings.iter().filter(|r| r.is_none()).count()
    }
}

/// Nearest-fingerprint localizer over a precomputed noise-free RSS map.
#[derive(Debug, Clone)]
pub struct GridLocalizer {
    grid: Vec<Location2D>,
    fingerprints: Vec<Vec<f64>>,
}

impl GridLocalizer {
    pub fn new(plan: &Floorplan, channel: &Channel) -> Self {
        let grid = plan.grid_points();
        let fingerprints = grid
            .iter()
            .map(|g| {
                plan.beacons
                    .iter()
                    .map(|b| channel.mean_rss(*b, *g))
                    .collect()
            })
            .collect();
        GridLocalizer { grid, fingerprints }
    }

    pub fn grid(&self) -> &[Location2D] {
        &self.grid
    }

    /// Negative squared RSS distance to each grid fingerprint; unheard
    /// beacons are skipped.
    pub fn scores(&self, sample: &RssSample) -> Vec<f64> {
        self.fingerprints
            .iter()
            .map(|fp| {
                -fp.iter()
                    .zip(&sample.readings)
                    .filter_map(|(pred, obs)| obs.map(|o| (o - pred) * (o - pred)))
                    .sum::<f64>()
            })
            .collect()
    }

    /// Top-k grid points (best first, ties in row-major order) and their
    /// centroid as the location estimate.
    pub fn localize(&self, sample: &RssSample, k: usize) -> Result<(Location2D, CandidateSet)> {
        if k == 0 || k > self.grid.len() {
            return Err(Error::Config(format!(
                "k must be in 1..={}, got {k}",
                self.grid.len()
            )));
        }
        let scores = self.scores(sample);
        let rank = |a: &usize, b: &usize| scores[*b].total_cmp(&scores[*a]).then(a.cmp(b));
        let mut order: Vec<usize> = (0..self.grid.len()).collect();
        if k < order.len() {
            order.select_nth_unstable_by(k - 1, rank);
            order.truncate(k);
        }
        order.sort_unstable_by(rank);
        let candidates: Vec<Location2D> = order.iter().map(|&i| self.grid[i]).collect();
        let n = k as f64;
        let (sx, sy) = candidates
            .iter()
            .fold((0.0, 0.0), |(sx, sy), c| (sx + c.x, sy + c.y));
        let estimate = Location2D::new(sx / n, sy / n);
        Ok((estimate, CandidateSet::new(estimate, candidates)?))
    }
}

pub fn grid_localize(
    sample: &RssSample,
    plan: &Floorplan,
    channel: &Channel,
    k: usize,
) -> Result<(Location2D, CandidateSet)> {
    GridLocalizer::new(plan, channel).localize(sample, k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub timestamp: f64,
    pub truth: Location2D,
    pub estimate: Location2D,
    /// Top-k grid points behind the estimate; empty when the source has none.
    pub candidates: Vec<Location2D>,
}

impl TraceEntry {
    pub fn error(&self) -> f64 {
        self.estimate.distance(self.truth)
    }

    pub fn candidate_set(&self) -> Option<CandidateSet> {
        CandidateSet::new(self.estimate, self.candidates.clone()).ok()
    }
}

pub type Trace = Vec<TraceEntry>;

/// Fixes displaced from `truth` by `max(0, N(mu, sigma))` meters in a
/// uniformly random direction.
pub fn synth_error_trace<R: Rng + ?Sized>(
    truth: Location2D,
    mu: f64,
    sigma: f64,
    n: usize,
    rng: &mut R,
) -> Result<Trace> {
    if !(sigma >= 0.0 && sigma.is_finite() && mu.is_finite()) {
        return Err(Error::Config(format!(
            "invalid error model mu={mu} sigma={sigma}"
        )));
    }
    Ok((0..n)
        .map(|i| {
            let z: f64 = StandardNormal.sample(rng);
            let dist = (mu + sigma * z).max(0.0);
            let bearing = rng.random_range(0.0..std::f64::consts::TAU);
            let (s, c) = bearing.sin_cos();
            TraceEntry {
                timestamp: i as f64,
                truth,
                estimate: truth + Location2D::new(dist * c, dist * s),
                candidates: Vec::new(),
            }
        })
        .collect())
}

/// Scans and localizes `samples_per_point` times at each trajectory point,
/// one fix per second.
pub fn simulate_session<R: Rng + ?Sized>(
    plan: &Floorplan,
    trajectory: &[Location2D],
    channel: &Channel,
    k: usize,
    samples_per_point: usize,
    rng: &mut R,
) -> Result<Trace> {
    channel.validate()?;
    if let Some(p) = trajectory.iter().find(|p| !plan.contains(**p)) {
        return Err(plan.out_of_bounds(*p));
    }
    let localizer = GridLocalizer::new(plan, channel);
    let mut trace = Vec::with_capacity(trajectory.len() * samples_per_point);
    for &truth in trajectory {
        for _ in 0..samples_per_point {
            let timestamp = trace.len() as f64;
            let sample = RssSample::scan(plan, channel, truth, timestamp, rng);
            let (estimate, cands) = localizer.localize(&sample, k)?;
            trace.push(TraceEntry {
                timestamp,
                truth,
                estimate,
                candidates: cands.candidates().to_vec(),
            });
        }
    }
    Ok(trace)
}

/// `count` distinct grid points drawn uniformly, in draw order.
pub fn survey_points<R: Rng + ?Sized>(
    plan: &Floorplan,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Location2D>> {
    let grid = plan.grid_points();
    if count > grid.len() {
        return Err(Error::Config(format!(
            "requested {count} survey points but the grid has {}",
            grid.len()
        )));
    }
    Ok(index::sample(rng, grid.len(), count)
        .into_iter()
        .map(|i| grid[i])
        .collect())
}

/// Constant-speed walk along straight segments between random waypoints,
/// sampled every `dt` seconds. Yields `fixes` positions.
pub fn waypoint_walk<R: Rng + ?Sized>(
    plan: &Floorplan,
    speed: f64,
    dt: f64,
    fixes: usize,
    rng: &mut R,
) -> Result<Vec<Location2D>> {
    if !(speed > 0.0 && dt > 0.0) {
        return Err(Error::Config(format!(
            "walk needs positive speed and dt, got {speed} and {dt}"
        )));
    }
    let random_point = |rng: &mut R| {
        Location2D::new(
            rng.random_range(0.0..=plan.width),
            rng.random_range(0.0..=plan.height),
        )
    };
    let mut pos = random_point(rng);
    let mut target = random_point(rng);
    let step = speed * dt;
    let mut out = Vec::with_capacity(fixes);
    while out.len() < fixes {
        out.push(pos);
        let mut remaining = step;
        loop {
            let gap = pos.distance(target);
            if gap > remaining {
                let t = remaining / gap;
                pos = pos + (target - pos).scale(t);
                break;
            }
            remaining -= gap;
            pos = target;
            target = random_point(rng);
        }
    }
    Ok(out)
}
