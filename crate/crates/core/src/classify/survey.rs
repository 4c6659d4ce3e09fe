use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::combinadic::{binomial, next_combination, unrank};
use super::verdict::{Classifier3D, VerdictTag};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::span::PointSet;

const CHUNK: u64 = 1 << 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyConfig {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Refuse to run when the subset count exceeds this.
    pub max_subsets: u64,
    /// Violations kept in full; the total is always counted.
    pub max_stored_violations: usize,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig {
            threads: None,
            max_subsets: 10_000_000,
            max_stored_violations: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Colex rank of the subset among q²-subsets of affine ranks.
    pub rank: u64,
    pub points: Vec<Vec<Elem>>,
    pub undetermined: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyTally {
    pub q: u32,
    pub total: u64,
    pub counts: BTreeMap<VerdictTag, u64>,
    /// Subsets keyed by number of undetermined lines.
    pub undetermined_histogram: BTreeMap<usize, u64>,
    /// Sets with one undetermined line that are also cylinders.
    pub one_undetermined_cylinders: u64,
    pub witnesses_checked: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

impl SurveyTally {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn count(&self, tag: VerdictTag) -> u64 {
        self.counts.get(&tag).copied().unwrap_or(0)
    }

    fn merge(mut self, other: SurveyTally, cap: usize) -> SurveyTally {
        self.total += other.total;
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        for (k, v) in other.undetermined_histogram {
            *self.undetermined_histogram.entry(k).or_default() += v;
        }
        self.one_undetermined_cylinders += other.one_undetermined_cylinders;
        self.witnesses_checked += other.witnesses_checked;
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations);
        self.violations.sort_by_key(|v| v.rank);
        self.violations.truncate(cap);
        self
    }
}

/// Incidence masks of AG(3,q) packed into single words.
struct Tables {
    q: usize,
    /// For each ideal line (line-engine order), its q parallel planes.
    planes: Vec<Vec<u64>>,
    /// `pair_line[a * q³ + b]`: the affine line through points a and b.
    pair_line: Vec<u64>,
}

impl Tables {
    fn new(classifier: &Classifier3D) -> Self {
        let q = classifier.field().q() as usize;
        let size = q * q * q;
        let planes = (0..classifier.line_engine().directions().len())
            .map(|i| classifier.line_engine().flat_masks(i).map(|m| m[0]).collect())
            .collect();
        let mut pair_line = vec![0u64; size * size];
        let points = classifier.point_engine();
        for i in 0..points.directions().len() {
            for m in points.flat_masks(i) {
                let line = m[0];
                let members: Vec<usize> = (0..size).filter(|&b| line >> b & 1 == 1).collect();
                for &a in &members {
                    for &b in &members {
                        pair_line[a * size + b] = line;
                    }
                }
            }
        }
        Tables { q, planes, pair_line }
    }

    /// Bit i set iff ideal line i is undetermined by the q²-set `u`: every
    /// plane through it holds exactly q points of `u`, and they are collinear.
    #[inline]
    fn undetermined(&self, u: u64) -> u64 {
        let size = self.q * self.q * self.q;
        let mut out = 0u64;
        'lines: for (i, planes) in self.planes.iter().enumerate() {
            for &plane in planes {
                let hit = u & plane;
                if hit.count_ones() as usize != self.q {
                    continue 'lines;
                }
                let a = hit.trailing_zeros() as usize;
                let b = (hit & (hit - 1)).trailing_zeros() as usize;
                if self.pair_line[a * size + b] != hit {
                    continue 'lines;
                }
            }
            out |= 1 << i;
        }
        out
    }
}

/// Classifies every q²-subset of AG(3,q) for q ≤ 3, re-checking each witness.
///
/// A bit-mask pass finds the undetermined lines of each subset; subsets with
/// any undetermined line then go through [`Classifier3D`], whose result must
/// agree with the mask pass.
pub fn survey_exhaustive(q: u32, config: &SurveyConfig) -> Result<SurveyTally> {
    if !(2..=3).contains(&q) {
        return Err(Error::Unsupported(format!("exhaustive survey needs q in {{2,3}}, got {q}")));
    }
    let size = q * q * q;
    let k = q * q;
    let total = binomial(size as u64, k as u64);
    if total > config.max_subsets {
        return Err(Error::ResourceLimit(format!(
            "{total} subsets exceed the cap of {}",
            config.max_subsets
        )));
    }
    let field = Arc::new(Field::of_order(q)?);
    let classifier = Classifier3D::new(field)?;
    let tables = Tables::new(&classifier);
    let cap = config.max_stored_violations;
    let chunks = total.div_ceil(CHUNK);

    let run = || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * CHUNK;
                let end = (start + CHUNK).min(total);
                survey_range(&classifier, &tables, start, end, size, k, cap)
            })
            .reduce(SurveyTally::default, |a, b| a.merge(b, cap))
    };
    let mut tally = match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::ResourceLimit(e.to_string()))?
            .install(run),
        None => run(),
    };
    tally.q = q;
    Ok(tally)
}

fn survey_range(
    classifier: &Classifier3D,
    tables: &Tables,
    start: u64,
    end: u64,
    size: u32,
    k: u32,
    cap: usize,
) -> SurveyTally {
    let mut tally = SurveyTally::default();
    let mut mask = unrank(start, size, k);
    for rank in start..end {
        tally.total += 1;
        let fast = tables.undetermined(mask);
        let n = fast.count_ones() as usize;
        *tally.undetermined_histogram.entry(n).or_default() += 1;
        if n == 0 {
            *tally.counts.entry(VerdictTag::AllDetermined).or_default() += 1;
        } else if let Err(reason) = classify_one(classifier, mask, fast, &mut tally) {
            tally.violation_count += 1;
            if tally.violations.len() < cap {
                let u = PointSet::from_words(classifier.field().clone(), 3, vec![mask]).expect("valid mask");
                tally.violations.push(Violation {
                    rank,
                    points: u.points(),
                    undetermined: n,
                    reason,
                });
            }
        }
        mask = next_combination(mask);
    }
    tally
}

fn classify_one(classifier: &Classifier3D, mask: u64, fast: u64, tally: &mut SurveyTally) -> std::result::Result<(), String> {
    let field = classifier.field();
    let u = PointSet::from_words(field.clone(), 3, vec![mask]).map_err(|e| e.to_string())?;
    let verdict = classifier.classify(&u).map_err(|e| e.to_string())?;
    let engine = classifier.line_engine();
    let slow = verdict
        .undetermined
        .iter()
        .map(|l| engine.index_of(l).map(|i| 1u64 << i))
        .sum::<Option<u64>>();
    if slow != Some(fast) {
        return Err("mask pass and classifier disagree on undetermined lines".into());
    }
    verdict.check_witness(field, &u)?;
    tally.witnesses_checked += 1;
    *tally.counts.entry(verdict.tag).or_default() += 1;
    if verdict.tag == VerdictTag::OneUndetermined && verdict.cylinder.is_some() {
        tally.one_undetermined_cylinders += 1;
    }
    Ok(())
}
