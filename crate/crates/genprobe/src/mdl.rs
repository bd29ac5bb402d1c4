//! Description-length model of label-distribution complexity.
//!
//! A support set over a product space of N groups (v values each) is encoded
//! under five cost axioms: a singleton costs 1, a whole group costs c
//! (1 < c < v), unions are subadditive, removing a set S1 costs
//! d*L(S1) + 1, and a product costs the sum of its factors plus 1. Two
//! canonical constructions give upper bounds on the minimal code length:
//! enumerating the support, or taking the full product space and removing
//! the complement. The code-length model is their minimum; `g_star` is the
//! support size where the two constructions cost the same, which is where
//! the model is hardest to encode.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MdlError {
    #[error("support size {size} outside [0, {max}]")]
    SizeOutOfRange { size: usize, max: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Constants of the encoding scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodeCostParams {
    /// Cost of one whole group ("all"); must satisfy 1 < c < v.
    pub c: f64,
    /// Exception multiplier ("except"); must satisfy d >= 1.
    pub d: f64,
    /// Number of groups N.
    pub group_count: usize,
    /// Values per group v.
    pub group_size: usize,
}

impl CodeCostParams {
    pub fn new(c: f64, d: f64, group_count: usize, group_size: usize) -> Result<Self, MdlError> {
        if !(c > 1.0 && c < group_size as f64) {
            return Err(MdlError::InvalidParams(format!(
                "need 1 < c < v, got c={c}, v={group_size}"
            )));
        }
        if d < 1.0 {
            return Err(MdlError::InvalidParams(format!("need d >= 1, got d={d}")));
        }
        if group_count == 0 || group_size == 0 {
            return Err(MdlError::InvalidParams("empty space".into()));
        }
        Ok(Self { c, d, group_count, group_size })
    }

    /// Three digit positions of ten values each, the combination space the
    /// Rand% datasets live in.
    pub fn digits3(c: f64, d: f64) -> Result<Self, MdlError> {
        Self::new(c, d, 3, 10)
    }

    /// Total number of combinations v^N.
    pub fn space_size(&self) -> usize {
        self.group_size.pow(self.group_count as u32)
    }

    fn check_size(&self, support_size: usize) -> Result<(), MdlError> {
        let max = self.space_size();
        if support_size > max {
            return Err(MdlError::SizeOutOfRange { size: support_size, max });
        }
        Ok(())
    }
}

/// Cost of enumerating the support combination by combination: one unit per
/// member, unions free of overhead.
pub fn enumeration_bound(support_size: usize, params: &CodeCostParams) -> Result<f64, MdlError> {
    params.check_size(support_size)?;
    Ok(support_size as f64)
}

/// Cost of the full product space minus an enumerated complement:
/// (N-1) + N*c for the product of all groups, plus one except operation at
/// d per removed combination.
pub fn complement_bound(support_size: usize, params: &CodeCostParams) -> Result<f64, MdlError> {
    params.check_size(support_size)?;
    let n = params.group_count as f64;
    let exceptions = (params.space_size() - support_size) as f64;
    Ok((n - 1.0) + n * params.c + 1.0 + params.d * exceptions)
}

/// The model's code length: the cheaper of the two canonical constructions.
pub fn code_length(support_size: usize, params: &CodeCostParams) -> Result<f64, MdlError> {
    let e = enumeration_bound(support_size, params)?;
    let c = complement_bound(support_size, params)?;
    Ok(e.min(c))
}

/// Crossover point where enumeration and complement encodings cost the same.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossover {
    /// Support size |S*| at the crossover (real-valued).
    pub size: f64,
    /// The same point as a percentage of the space size.
    pub percent: f64,
}

/// Support size where the code length peaks. Setting the two bounds equal
/// gives |S*| = ((N-1) + N*c + 1 + d*v^N) / (1 + d).
pub fn g_star(params: &CodeCostParams) -> Crossover {
    let n = params.group_count as f64;
    let total = params.space_size() as f64;
    let size = ((n - 1.0) + n * params.c + 1.0 + params.d * total) / (1.0 + params.d);
    Crossover { size, percent: 100.0 * size / total }
}

/// One row of the code-length table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CodeLengthRow {
    pub percent: f64,
    pub support_size: usize,
    pub enumeration: f64,
    pub complement: f64,
    pub code_length: f64,
}

/// Table of bounds over support percentages (of the whole space).
pub fn code_length_table(percents: &[f64], params: &CodeCostParams) -> Result<Vec<CodeLengthRow>, MdlError> {
    let total = params.space_size() as f64;
    percents
        .iter()
        .map(|&g| {
            let size = (g / 100.0 * total).round() as usize;
            Ok(CodeLengthRow {
                percent: g,
                support_size: size,
                enumeration: enumeration_bound(size, params)?,
                complement: complement_bound(size, params)?,
                code_length: code_length(size, params)?,
            })
        })
        .collect()
}

pub mod exhaustive {
    //! Exact minimal code length by exhaustive expression search, for tiny
    //! two-group spaces. Serves as an oracle for the canonical bounds.
    //!
    //! Expressions build either per-group sets or combination sets:
    //! leaves are per-group singletons (cost 1), whole groups (cost c), and
    //! combination singletons (cost 1); internal nodes are same-sort unions
    //! (cost a+b), same-sort set differences (cost a + d*b + 1), and
    //! products of one set per group (cost a + b + 1).

    use super::{CodeCostParams, MdlError};

    /// Minimal cost per combination-set bitmask (v*v bits, group-0-major)
    /// over all expressions of depth at most `max_depth`. Infinite entries
    /// mean the set is unreachable within the depth budget.
    pub fn min_lengths_two_groups(params: &CodeCostParams, max_depth: usize) -> Result<Vec<f64>, MdlError> {
        if params.group_count != 2 {
            return Err(MdlError::InvalidParams("exhaustive search handles exactly 2 groups".into()));
        }
        let v = params.group_size;
        if v * v > 16 {
            return Err(MdlError::InvalidParams(format!(
                "space {v}x{v} too large for bitmask search"
            )));
        }
        let n_combo = 1usize << (v * v);
        let n_group = 1usize << v;
        let inf = f64::INFINITY;

        // best cost at depth <= current layer
        let mut combo = vec![inf; n_combo];
        let mut group = vec![vec![inf; n_group]; 2];

        // depth-1 leaves
        for g in 0..2 {
            for i in 0..v {
                group[g][1 << i] = group[g][1 << i].min(1.0);
            }
            group[g][n_group - 1] = group[g][n_group - 1].min(params.c);
        }
        for a in 0..v {
            for b in 0..v {
                let mask = 1usize << (a * v + b);
                combo[mask] = combo[mask].min(1.0);
            }
        }

        for _ in 1..max_depth {
            let prev_combo = combo.clone();
            let prev_group = group.clone();

            // per-group unions and differences
            for g in 0..2 {
                for a in 0..n_group {
                    if prev_group[g][a].is_infinite() {
                        continue;
                    }
                    for b in 0..n_group {
                        if prev_group[g][b].is_infinite() {
                            continue;
                        }
                        let union = a | b;
                        let cost = prev_group[g][a] + prev_group[g][b];
                        if cost < group[g][union] {
                            group[g][union] = cost;
                        }
                        let diff = a & !b;
                        let cost = prev_group[g][a] + params.d * prev_group[g][b] + 1.0;
                        if cost < group[g][diff] {
                            group[g][diff] = cost;
                        }
                    }
                }
            }

            // products of one set per group
            for a in 0..n_group {
                if prev_group[0][a].is_infinite() {
                    continue;
                }
                for b in 0..n_group {
                    if prev_group[1][b].is_infinite() {
                        continue;
                    }
                    let mut mask = 0usize;
                    for i in 0..v {
                        if a & (1 << i) == 0 {
                            continue;
                        }
                        for j in 0..v {
                            if b & (1 << j) != 0 {
                                mask |= 1 << (i * v + j);
                            }
                        }
                    }
                    let cost = prev_group[0][a] + prev_group[1][b] + 1.0;
                    if cost < combo[mask] {
                        combo[mask] = cost;
                    }
                }
            }

            // combination-set unions and differences
            for a in 0..n_combo {
                if prev_combo[a].is_infinite() {
                    continue;
                }
                for b in 0..n_combo {
                    if prev_combo[b].is_infinite() {
                        continue;
                    }
                    let union = a | b;
                    let cost = prev_combo[a] + prev_combo[b];
                    if cost < combo[union] {
                        combo[union] = cost;
                    }
                    let diff = a & !b;
                    let cost = prev_combo[a] + params.d * prev_combo[b] + 1.0;
                    if cost < combo[diff] {
                        combo[diff] = cost;
                    }
                }
            }
        }

        combo[0] = 0.0; // the empty support needs no code
        Ok(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digits3() -> CodeCostParams {
        CodeCostParams::digits3(10.0, 1.0).unwrap()
    }

    #[test]
    fn params_enforce_constant_ranges() {
        assert!(CodeCostParams::new(1.0, 1.0, 3, 10).is_err());
        assert!(CodeCostParams::new(10.0, 1.0, 3, 10).is_ok());
        assert!(CodeCostParams::new(10.0, 0.5, 3, 10).is_err());
        assert!(CodeCostParams::new(9.9, 1.0, 3, 10).is_ok());
        // c must stay below the group size
        assert!(CodeCostParams::new(3.0, 1.0, 2, 3).is_err());
    }

    #[test]
    fn enumeration_bound_is_support_size() {
        let p = digits3();
        assert_eq!(enumeration_bound(40, &p).unwrap(), 40.0);
        assert_eq!(enumeration_bound(10, &p).unwrap(), 10.0);
        assert_eq!(enumeration_bound(0, &p).unwrap(), 0.0);
        assert!(matches!(
            enumeration_bound(1001, &p),
            Err(MdlError::SizeOutOfRange { .. })
        ));
    }

    #[test]
    fn complement_bound_matches_three_digit_values() {
        let p = digits3();
        // 3 + 3c + d*(1000 - |S|)
        assert_eq!(complement_bound(840, &p).unwrap(), 193.0);
        assert_eq!(complement_bound(1000, &p).unwrap(), 33.0);
        assert_eq!(complement_bound(990, &p).unwrap(), 43.0);
    }

    #[test]
    fn code_length_takes_the_min() {
        let p = digits3();
        assert_eq!(code_length(0, &p).unwrap(), 0.0);
        assert_eq!(code_length(600, &p).unwrap(), 433.0);
        assert_eq!(code_length(10, &p).unwrap(), 10.0);
    }

    #[test]
    fn crossover_reference_values() {
        let p = digits3();
        let x = g_star(&p);
        assert!((x.percent - 51.65).abs() < 1e-9);
        assert!((x.size - 516.5).abs() < 1e-9);

        let p2 = CodeCostParams::digits3(10.0, 2.0).unwrap();
        let x2 = g_star(&p2);
        assert!((x2.percent - 2033.0 / 30.0).abs() < 1e-9);
    }

    #[test]
    fn crossover_approaches_full_space_as_d_grows() {
        for d in [10.0, 100.0, 1e6] {
            let p = CodeCostParams::digits3(10.0, d).unwrap();
            let x = g_star(&p);
            assert!(x.percent <= 100.0 + 1e-9);
            if d >= 1e6 {
                assert!((x.percent - 100.0).abs() < 1e-2);
            }
        }
    }

    #[test]
    fn code_length_is_unimodal_with_peak_at_crossover() {
        // exhaustive over spaces up to 10^4 cells
        for (n, v, c, d) in [(3usize, 10usize, 10.0, 1.0), (2, 10, 5.0, 1.5), (4, 10, 8.0, 1.0), (2, 100, 60.0, 1.0)] {
            let p = CodeCostParams::new(c, d, n, v).unwrap();
            let total = p.space_size();
            assert!(total <= 10_000);
            let star = g_star(&p).size;
            let lengths: Vec<f64> = (0..=total).map(|s| code_length(s, &p).unwrap()).collect();
            let peak = lengths
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            assert!(
                peak == star.floor() as usize || peak == star.ceil() as usize,
                "peak {peak} vs crossover {star}"
            );
            // increasing up to the peak, decreasing after
            for w in lengths[..=peak].windows(2) {
                assert!(w[0] <= w[1] + 1e-12);
            }
            for w in lengths[peak..].windows(2) {
                assert!(w[0] + 1e-12 >= w[1]);
            }
        }
    }

    #[test]
    fn full_space_complement_is_cheaper_than_enumeration() {
        // at |S| = v^N the complement costs (N-1) + N*c + 1, which stays
        // below enumeration whenever c < v
        for (n, v, c) in [(3usize, 10usize, 10.0), (2, 3, 2.5), (2, 5, 4.0)] {
            let p = CodeCostParams::new(c, 1.0, n, v).unwrap();
            let full = p.space_size();
            let comp = complement_bound(full, &p).unwrap();
            assert_eq!(comp, (n as f64 - 1.0) + n as f64 * c + 1.0);
            assert!(comp <= enumeration_bound(full, &p).unwrap());
        }
    }

    #[test]
    fn exhaustive_search_respects_leaf_costs() {
        let p = CodeCostParams::new(2.5, 1.0, 2, 3).unwrap();
        let min = exhaustive::min_lengths_two_groups(&p, 6).unwrap();
        // a single combination is a leaf of cost 1
        assert_eq!(min[1], 1.0);
        // the full 3x3 space: product of two alls = 2c + 1
        assert_eq!(min[(1 << 9) - 1], 2.0 * p.c + 1.0);
        // empty support is free
        assert_eq!(min[0], 0.0);
    }
}
