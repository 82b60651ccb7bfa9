//! Model definition: the box, the imaginary antisymmetric well inside it, and
//! the bookkeeping of the four regions every closed form is split into.
//!
//! Units are ħ = 2m = 1, so the Hamiltonian is `-d²/dx² + V(x)` and all
//! quantities are dimensionless.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Box half-width `L`, well half-width `l` and imaginary strength `g` of
/// `V(x) = i g sign(x)` for `|x| <= l`, zero for `l < |x| < L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemParams {
    #[serde(rename = "L")]
    box_half_width: f64,
    #[serde(rename = "l")]
    well_half_width: f64,
    #[serde(rename = "g")]
    coupling: f64,
}

/// Validates `0 < l < L` and `g >= 0`.
pub fn make_problem(box_half_width: f64, well_half_width: f64, coupling: f64) -> Result<ProblemParams> {
    let (big_l, l, g) = (box_half_width, well_half_width, coupling);
    if !(big_l.is_finite() && l.is_finite() && g.is_finite()) {
        return Err(Error::Domain("parameters must be finite".into()));
    }
    if big_l <= 0.0 {
        return Err(Error::Domain("L > 0 violated".into()));
    }
    if l <= 0.0 {
        return Err(Error::Domain("l > 0 violated".into()));
    }
    if l >= big_l {
        return Err(Error::Domain("l < L violated".into()));
    }
    if g < 0.0 {
        return Err(Error::Domain("g >= 0 violated".into()));
    }
    Ok(ProblemParams {
        box_half_width: big_l,
        well_half_width: l,
        coupling: g,
    })
}

impl ProblemParams {
    pub fn new(box_half_width: f64, well_half_width: f64, coupling: f64) -> Result<Self> {
        make_problem(box_half_width, well_half_width, coupling)
    }

    #[inline]
    pub fn box_half_width(&self) -> f64 {
        self.box_half_width
    }

    #[inline]
    pub fn well_half_width(&self) -> f64 {
        self.well_half_width
    }

    #[inline]
    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn is_hermitian(&self) -> bool {
        self.coupling == 0.0
    }

    /// Same geometry, different coupling.
    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        make_problem(self.box_half_width, self.well_half_width, coupling)
    }

    /// Ground-state energy of the empty box, `(π / 2L)²`. Every eigenvalue of
    /// the model has real part at least this large, since the potential is
    /// purely imaginary.
    pub fn energy_scale(&self) -> f64 {
        (PI / (2.0 * self.box_half_width)).powi(2)
    }

    /// Interior discontinuity points `-l, 0, l`.
    pub fn breakpoints(&self) -> [f64; 3] {
        [-self.well_half_width, 0.0, self.well_half_width]
    }

    pub fn regions(&self) -> [Region; 4] {
        let (big_l, l) = (self.box_half_width, self.well_half_width);
        [
            Region { tag: RegionTag::L2, interval: (-big_l, -l) },
            Region { tag: RegionTag::L1, interval: (-l, 0.0) },
            Region { tag: RegionTag::R1, interval: (0.0, l) },
            Region { tag: RegionTag::R2, interval: (l, big_l) },
        ]
    }

    pub fn region(&self, tag: RegionTag) -> Region {
        self.regions()[tag as usize]
    }

    /// Region a point belongs to. Points `±l` go to the outer regions and
    /// the origin to `R1`.
    pub fn locate(&self, x: f64) -> Result<RegionTag> {
        self.check_in_box(x)?;
        let l = self.well_half_width;
        Ok(if x <= -l {
            RegionTag::L2
        } else if x >= l {
            RegionTag::R2
        } else if x >= 0.0 {
            RegionTag::R1
        } else {
            RegionTag::L1
        })
    }

    pub(crate) fn check_in_box(&self, x: f64) -> Result<()> {
        if !x.is_finite() || x.abs() > self.box_half_width {
            return Err(Error::Domain(format!(
                "|x| <= L violated: x = {x}, L = {}",
                self.box_half_width
            )));
        }
        Ok(())
    }

    pub(crate) fn check_open_box(&self, x: f64) -> Result<()> {
        if !x.is_finite() || x.abs() >= self.box_half_width {
            return Err(Error::Domain(format!(
                "|x| < L violated: x = {x}, L = {}",
                self.box_half_width
            )));
        }
        Ok(())
    }

    /// Value of `V^(+)` inside a given region.
    pub fn vplus_in(&self, tag: RegionTag) -> Complex64 {
        match tag {
            RegionTag::L2 | RegionTag::R2 => Complex64::new(0.0, 0.0),
            RegionTag::L1 => Complex64::new(0.0, -self.coupling),
            RegionTag::R1 => Complex64::new(0.0, self.coupling),
        }
    }
}

impl fmt::Display for ProblemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "L = {}, l = {}, g = {}",
            self.box_half_width, self.well_half_width, self.coupling
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionTag {
    L2 = 0,
    L1 = 1,
    R1 = 2,
    R2 = 3,
}

impl RegionTag {
    pub const ALL: [RegionTag; 4] = [RegionTag::L2, RegionTag::L1, RegionTag::R1, RegionTag::R2];

    pub fn is_outer(self) -> bool {
        matches!(self, RegionTag::L2 | RegionTag::R2)
    }

    /// Region mapped onto by `x -> -x`.
    pub fn mirror(self) -> RegionTag {
        match self {
            RegionTag::L2 => RegionTag::R2,
            RegionTag::L1 => RegionTag::R1,
            RegionTag::R1 => RegionTag::L1,
            RegionTag::R2 => RegionTag::L2,
        }
    }
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RegionTag::L2 => "L2",
            RegionTag::L1 => "L1",
            RegionTag::R1 => "R1",
            RegionTag::R2 => "R2",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub tag: RegionTag,
    pub interval: (f64, f64),
}

impl Region {
    pub fn width(&self) -> f64 {
        self.interval.1 - self.interval.0
    }
}

/// `V^(+)(x)`. At `±l` the value from the field-free side is returned, at the
/// origin zero.
pub fn eval_vplus(x: f64, p: &ProblemParams) -> Result<Complex64> {
    p.check_in_box(x)?;
    if x == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(p.vplus_in(p.locate(x)?))
}

/// Splits `κ² = -E + i g` into `κ = s + i t` with `t > 0`, `s >= 0`, so that
/// `E = t² - s²` and `g = 2 s t`.
pub fn decompose_kappa(energy: f64, coupling: f64) -> (f64, f64, Complex64) {
    let r = energy.hypot(coupling);
    // Take the large root directly and the small one from g = 2st, which
    // avoids cancellation in sqrt((r -/+ E) / 2).
    let (s, t) = if energy >= 0.0 {
        let t = ((r + energy) / 2.0).sqrt();
        let s = if t > 0.0 { coupling / (2.0 * t) } else { 0.0 };
        (s, t)
    } else {
        let s = ((r - energy) / 2.0).sqrt();
        let t = if s > 0.0 { coupling / (2.0 * s) } else { 0.0 };
        (s, t)
    };
    (s, t, Complex64::new(s, t))
}

/// One real eigenvalue `E_n = k_n²` together with `κ_n = s_n + i t_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyLevel {
    pub n: usize,
    #[serde(rename = "E")]
    pub energy: f64,
    pub k: f64,
    pub s: f64,
    pub t: f64,
    pub kappa: Complex64,
}

impl EnergyLevel {
    pub fn new(n: usize, energy: f64, coupling: f64) -> Result<Self> {
        if !(energy.is_finite() && energy > 0.0) {
            return Err(Error::Domain(format!("E > 0 violated: E = {energy}")));
        }
        let (s, t, kappa) = decompose_kappa(energy, coupling);
        Ok(EnergyLevel {
            n,
            energy,
            k: energy.sqrt(),
            s,
            t,
            kappa,
        })
    }

    pub fn coupling(&self) -> f64 {
        2.0 * self.s * self.t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexSample {
    pub x: f64,
    pub value: Complex64,
}

/// `count` equally spaced points on `[-L + margin, L - margin]`.
pub fn interior_grid(box_half_width: f64, count: usize, margin: f64) -> Vec<f64> {
    let (a, b) = (-box_half_width + margin, box_half_width - margin);
    match count {
        0 => Vec::new(),
        1 => vec![0.5 * (a + b)],
        _ => {
            let step = (b - a) / (count - 1) as f64;
            (0..count).map(|i| a + step * i as f64).collect()
        }
    }
}

/// Drops points closer than `gap` to any interior discontinuity.
pub fn away_from_breakpoints(points: &[f64], p: &ProblemParams, gap: f64) -> Vec<f64> {
    let bps = p.breakpoints();
    points
        .iter()
        .copied()
        .filter(|x| bps.iter().all(|b| (x - b).abs() > gap))
        .collect()
}
