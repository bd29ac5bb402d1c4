//! Normalized discrete distributions over binned feature values or
//! combination ids, and discrete convolution between them.

use std::collections::BTreeMap;
use std::io;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::space::{ComboId, CombinationSpace, FeatureKind, FeatureSpec, FeatureValue};

/// Mass-sum tolerance for the normalization invariant.
pub const NORM_TOL: f64 = 1e-9;

/// The axis a histogram is defined over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Half-open bins `[lo + k*w, lo + (k+1)*w)` anchored at `lo`; the final
    /// bin is closed at `hi`. Bin ids are indices `0..n_bins`.
    Continuous { lo: f64, hi: f64, bin_width: f64 },
    /// Bin ids are the literal integer values.
    Integer { values: Vec<i64> },
    /// Bin ids are the literal labels.
    Categorical { values: Vec<String> },
    /// Unbounded signed lattice in units of `bin_width`; used for centered
    /// convolution kernels. Bin ids are signed offsets.
    Offset { bin_width: f64 },
    /// Bin ids are combination ids of the space.
    Combination(CombinationSpace),
}

impl Axis {
    pub fn from_spec(spec: &FeatureSpec) -> Self {
        match &spec.kind {
            FeatureKind::Continuous { lo, hi, bin_width } => Axis::Continuous {
                lo: *lo,
                hi: *hi,
                bin_width: *bin_width,
            },
            FeatureKind::Integer { values } => Axis::Integer { values: values.clone() },
            FeatureKind::Categorical { values } => Axis::Categorical { values: values.clone() },
        }
    }

    /// Lattice step for gridded axes, `None` for categorical/combination.
    pub fn lattice_width(&self) -> Option<f64> {
        match self {
            Axis::Continuous { bin_width, .. } | Axis::Offset { bin_width } => Some(*bin_width),
            Axis::Integer { values } if is_contiguous(values) => Some(1.0),
            _ => None,
        }
    }

    /// Number of bins for bounded axes.
    pub fn bin_count(&self) -> Option<usize> {
        match self {
            Axis::Continuous { lo, hi, bin_width } => Some(continuous_bin_count(*lo, *hi, *bin_width)),
            Axis::Integer { values } => Some(values.len()),
            Axis::Categorical { values } => Some(values.len()),
            Axis::Combination(space) => Some(space.size()),
            Axis::Offset { .. } => None,
        }
    }

    /// Bin index for a continuous value, clamped into range. Values within
    /// 1e-9 bin units below a boundary snap up, so grid-aligned inputs land
    /// in the intended half-open bin.
    pub fn continuous_bin_of(&self, value: f64) -> Option<i64> {
        match self {
            Axis::Continuous { lo, hi, bin_width } => {
                let n = continuous_bin_count(*lo, *hi, *bin_width) as i64;
                let k = (((value - lo) / bin_width) + 1e-9).floor() as i64;
                Some(k.clamp(0, n - 1))
            }
            _ => None,
        }
    }

    /// Representative position of a bin in feature units (bin center for
    /// continuous axes, the literal value otherwise).
    pub fn position(&self, id: &BinId) -> Option<f64> {
        match (self, id) {
            (Axis::Continuous { lo, bin_width, .. }, BinId::Idx(k)) => {
                Some(lo + (*k as f64 + 0.5) * bin_width)
            }
            (Axis::Offset { bin_width }, BinId::Idx(o)) => Some(*o as f64 * bin_width),
            (Axis::Integer { .. }, BinId::Int(v)) => Some(*v as f64),
            _ => None,
        }
    }

    /// Label used in CSV output: lower edge for continuous bins, the literal
    /// value for discrete bins, the offset in feature units for kernels.
    pub fn bin_label(&self, id: &BinId) -> String {
        match (self, id) {
            (Axis::Continuous { lo, bin_width, .. }, BinId::Idx(k)) => {
                format!("{}", lo + *k as f64 * bin_width)
            }
            (Axis::Offset { bin_width }, BinId::Idx(o)) => format!("{}", *o as f64 * bin_width),
            (Axis::Combination(space), BinId::Combo(c)) => space.label(c),
            (_, id) => format!("{id}"),
        }
    }

    pub fn parse_bin_label(&self, label: &str) -> Result<BinId, CoreError> {
        let bad = |l: &str| CoreError::Parse(format!("bin label `{l}` does not fit the axis"));
        match self {
            Axis::Continuous { lo, bin_width, .. } => {
                let x: f64 = label.parse().map_err(|_| bad(label))?;
                Ok(BinId::Idx(((x - lo) / bin_width).round() as i64))
            }
            Axis::Offset { bin_width } => {
                let x: f64 = label.parse().map_err(|_| bad(label))?;
                Ok(BinId::Idx((x / bin_width).round() as i64))
            }
            Axis::Integer { .. } => Ok(BinId::Int(label.parse().map_err(|_| bad(label))?)),
            Axis::Categorical { .. } => Ok(BinId::Cat(label.to_string())),
            Axis::Combination(space) => space.parse_label(label).map(BinId::Combo).ok_or_else(|| bad(label)),
        }
    }
}

fn is_contiguous(values: &[i64]) -> bool {
    values.windows(2).all(|w| w[1] == w[0] + 1)
}

fn continuous_bin_count(lo: f64, hi: f64, bin_width: f64) -> usize {
    let ratio = (hi - lo) / bin_width;
    if (ratio - ratio.round()).abs() < 1e-9 {
        ratio.round() as usize
    } else {
        ratio.ceil() as usize
    }
}

/// Identifier of one histogram bin. All bins of a histogram use the variant
/// its axis dictates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BinId {
    /// Grid index (continuous axes) or signed lattice offset (offset axes).
    Idx(i64),
    Int(i64),
    Cat(String),
    Combo(ComboId),
}

impl std::fmt::Display for BinId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BinId::Idx(k) => write!(f, "{k}"),
            BinId::Int(v) => write!(f, "{v}"),
            BinId::Cat(s) => write!(f, "{s}"),
            BinId::Combo(c) => write!(f, "{c}"),
        }
    }
}

/// A normalized discrete distribution: ordered `(bin id, mass)` pairs with
/// non-negative masses summing to 1 within [`NORM_TOL`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    axis: Axis,
    bins: Vec<(BinId, f64)>,
}

/// Result of estimating a histogram from raw samples.
#[derive(Debug, Clone)]
pub struct SampleHistogram {
    pub histogram: Histogram,
    /// Continuous values that fell outside the domain and were clipped to
    /// the nearest edge.
    pub clipped: usize,
}

impl Histogram {
    /// Validates ordering, non-negativity, and normalization.
    pub fn new(axis: Axis, bins: Vec<(BinId, f64)>) -> Result<Self, CoreError> {
        let mut sum = 0.0;
        for (i, (id, m)) in bins.iter().enumerate() {
            if !m.is_finite() || *m < 0.0 {
                return Err(CoreError::InvalidSpec(format!("bin {id} has invalid mass {m}")));
            }
            if i > 0 && bins[i - 1].0 >= *id {
                return Err(CoreError::InvalidSpec(format!("bin ids not strictly ordered at {id}")));
            }
            sum += m;
        }
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(CoreError::NotNormalized { sum });
        }
        Ok(Self { axis, bins })
    }

    /// Builds from unsorted, unnormalized masses; zero-mass bins dropped.
    pub fn from_masses(axis: Axis, masses: BTreeMap<BinId, f64>) -> Result<Self, CoreError> {
        let total: f64 = masses.values().sum();
        if !(total > 0.0) {
            return Err(CoreError::EmptySample);
        }
        let bins = masses
            .into_iter()
            .filter(|(_, m)| *m > 0.0)
            .map(|(id, m)| (id, m / total))
            .collect();
        Ok(Self { axis, bins })
    }

    pub fn delta(axis: Axis, id: BinId) -> Self {
        Self { axis, bins: vec![(id, 1.0)] }
    }

    pub fn axis(&self) -> &Axis {
        &self.axis
    }

    pub fn bins(&self) -> &[(BinId, f64)] {
        &self.bins
    }

    pub fn mass_of(&self, id: &BinId) -> f64 {
        match self.bins.binary_search_by(|(b, _)| b.cmp(id)) {
            Ok(i) => self.bins[i].1,
            Err(_) => 0.0,
        }
    }

    /// Modal bin; ties resolve to the lowest bin id.
    pub fn mode(&self) -> &BinId {
        let mut best = &self.bins[0];
        for b in &self.bins[1..] {
            if b.1 > best.1 {
                best = b;
            }
        }
        &best.0
    }

    /// Total variation distance; both histograms must share an axis.
    pub fn tv_distance(&self, other: &Histogram) -> Result<f64, CoreError> {
        if self.axis != other.axis {
            return Err(CoreError::AxisMismatch("total variation needs a shared axis".into()));
        }
        let mut d = 0.0;
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.bins.len() || j < other.bins.len() {
            match (self.bins.get(i), other.bins.get(j)) {
                (Some((a, ma)), Some((b, mb))) => match a.cmp(b) {
                    std::cmp::Ordering::Less => {
                        d += ma;
                        i += 1;
                    }
                    std::cmp::Ordering::Greater => {
                        d += mb;
                        j += 1;
                    }
                    std::cmp::Ordering::Equal => {
                        d += (ma - mb).abs();
                        i += 1;
                        j += 1;
                    }
                },
                (Some((_, ma)), None) => {
                    d += ma;
                    i += 1;
                }
                (None, Some((_, mb))) => {
                    d += mb;
                    j += 1;
                }
                (None, None) => break,
            }
        }
        Ok(0.5 * d)
    }

    /// Mean of the bin positions weighted by mass (gridded/integer axes).
    pub fn mean(&self) -> Option<f64> {
        let mut m = 0.0;
        for (id, mass) in &self.bins {
            m += self.axis.position(id)? * mass;
        }
        Some(m)
    }

    pub fn variance(&self) -> Option<f64> {
        let mean = self.mean()?;
        let mut v = 0.0;
        for (id, mass) in &self.bins {
            let x = self.axis.position(id)?;
            v += (x - mean) * (x - mean) * mass;
        }
        Some(v)
    }

    pub fn skewness(&self) -> Option<f64> {
        let mean = self.mean()?;
        let var = self.variance()?;
        if var <= 0.0 {
            return Some(0.0);
        }
        let mut s = 0.0;
        for (id, mass) in &self.bins {
            let x = self.axis.position(id)?;
            s += (x - mean).powi(3) * mass;
        }
        Some(s / var.powf(1.5))
    }

    /// Draws `n` bin ids proportionally to mass.
    pub fn sample_bins<R: Rng>(&self, n: usize, rng: &mut R) -> Vec<BinId> {
        let mut cum = Vec::with_capacity(self.bins.len());
        let mut acc = 0.0;
        for (_, m) in &self.bins {
            acc += m;
            cum.push(acc);
        }
        (0..n)
            .map(|_| {
                let u: f64 = rng.random::<f64>() * acc;
                let i = cum.partition_point(|&c| c < u).min(self.bins.len() - 1);
                self.bins[i].0.clone()
            })
            .collect()
    }

    /// Writes `bin,mass` CSV. Masses use the shortest lossless decimal form.
    pub fn write_csv<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "bin,mass")?;
        for (id, m) in &self.bins {
            writeln!(w, "{},{}", self.axis.bin_label(id), m)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Parses `bin,mass` CSV against a known axis.
    pub fn from_csv(axis: Axis, text: &str) -> Result<Self, CoreError> {
        let mut masses = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.eq_ignore_ascii_case("bin,mass")) {
                continue;
            }
            let (label, mass) = line
                .rsplit_once(',')
                .ok_or_else(|| CoreError::Parse(format!("line {}: expected `bin,mass`", lineno + 1)))?;
            let m: f64 = mass
                .trim()
                .parse()
                .map_err(|_| CoreError::Parse(format!("line {}: bad mass `{mass}`", lineno + 1)))?;
            let id = axis.parse_bin_label(label.trim())?;
            *masses.entry(id).or_insert(0.0) += m;
        }
        if masses.is_empty() {
            return Err(CoreError::EmptySample);
        }
        let bins: Vec<(BinId, f64)> = masses.into_iter().collect();
        Histogram::new(axis, bins)
    }
}

/// Empirical histogram over the feature's bins. Continuous values outside
/// the domain are clipped to the edges and counted, discrete values outside
/// the domain are an error.
pub fn histogram_from_samples(
    values: &[FeatureValue],
    spec: &FeatureSpec,
) -> Result<SampleHistogram, CoreError> {
    if values.is_empty() {
        return Err(CoreError::EmptySample);
    }
    let axis = Axis::from_spec(spec);
    let mut counts: BTreeMap<BinId, f64> = BTreeMap::new();
    let mut clipped = 0usize;
    for v in values {
        let id = match (&spec.kind, v) {
            (FeatureKind::Continuous { lo, hi, .. }, _) => {
                let x = v.as_f64().ok_or_else(|| CoreError::DomainMismatch {
                    feature: spec.name.clone(),
                    value: v.to_string(),
                })?;
                let c = x.clamp(*lo, *hi);
                if c != x {
                    clipped += 1;
                }
                BinId::Idx(axis.continuous_bin_of(c).expect("continuous axis"))
            }
            (FeatureKind::Integer { values }, FeatureValue::Int(i)) if values.contains(i) => {
                BinId::Int(*i)
            }
            (FeatureKind::Categorical { values }, FeatureValue::Str(s)) if values.contains(s) => {
                BinId::Cat(s.clone())
            }
            _ => {
                return Err(CoreError::DomainMismatch {
                    feature: spec.name.clone(),
                    value: v.to_string(),
                })
            }
        };
        *counts.entry(id).or_insert(0.0) += 1.0;
    }
    Ok(SampleHistogram {
        histogram: Histogram::from_masses(axis, counts)?,
        clipped,
    })
}

/// Convenience wrapper over [`histogram_from_samples`] for continuous data.
pub fn histogram_from_f64s(values: &[f64], spec: &FeatureSpec) -> Result<SampleHistogram, CoreError> {
    let vs: Vec<FeatureValue> = values.iter().map(|&x| FeatureValue::Float(x)).collect();
    histogram_from_samples(&vs, spec)
}

/// Empirical histogram over a combination space from observed ids.
pub fn histogram_from_combos(
    ids: &[ComboId],
    space: &CombinationSpace,
) -> Result<Histogram, CoreError> {
    if ids.is_empty() {
        return Err(CoreError::EmptySample);
    }
    let mut counts: BTreeMap<BinId, f64> = BTreeMap::new();
    for id in ids {
        if !space.contains(id) {
            return Err(CoreError::DomainMismatch {
                feature: "<combination>".into(),
                value: id.to_string(),
            });
        }
        *counts.entry(BinId::Combo(id.clone())).or_insert(0.0) += 1.0;
    }
    Histogram::from_masses(Axis::Combination(space.clone()), counts)
}

fn widths_match(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Discrete convolution of a distribution with a centered kernel.
///
/// The kernel must live on an offset axis with the same lattice width as
/// `p`. On bounded axes the result is truncated to the representable bins
/// and re-normalized; on offset axes the full Minkowski-sum support is kept.
pub fn discrete_convolve(p: &Histogram, h: &Histogram) -> Result<Histogram, CoreError> {
    let kernel_width = match h.axis() {
        Axis::Offset { bin_width } => *bin_width,
        other => {
            return Err(CoreError::AxisMismatch(format!(
                "kernel must be on an offset axis, got {other:?}"
            )))
        }
    };
    let p_width = p.axis().lattice_width().ok_or_else(|| {
        CoreError::AxisMismatch("convolution needs a gridded distribution axis".into())
    })?;
    if !widths_match(p_width, kernel_width) {
        return Err(CoreError::AxisMismatch(format!(
            "bin widths differ: {p_width} vs {kernel_width}"
        )));
    }

    let mut out: BTreeMap<BinId, f64> = BTreeMap::new();
    for (pb, pm) in p.bins() {
        let pk = match pb {
            BinId::Idx(k) => *k,
            BinId::Int(v) => *v,
            _ => unreachable!("gridded axes index by lattice position"),
        };
        for (hb, hm) in h.bins() {
            let o = match hb {
                BinId::Idx(o) => *o,
                _ => unreachable!("offset axes index by offset"),
            };
            let t = pk + o;
            let id = match p.axis() {
                Axis::Continuous { .. } => {
                    let n = p.axis().bin_count().unwrap() as i64;
                    if t < 0 || t >= n {
                        continue; // truncated to the representable range
                    }
                    BinId::Idx(t)
                }
                Axis::Offset { .. } => BinId::Idx(t),
                Axis::Integer { values } => {
                    if !values.contains(&t) {
                        continue;
                    }
                    BinId::Int(t)
                }
                _ => unreachable!(),
            };
            *out.entry(id).or_insert(0.0) += pm * hm;
        }
    }
    if out.values().sum::<f64>() <= 0.0 {
        return Err(CoreError::AxisMismatch(
            "convolution support lies entirely outside the axis domain".into(),
        ));
    }
    Histogram::from_masses(p.axis().clone(), out)
}
