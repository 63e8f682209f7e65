//! Materializing pre-training datasets as explicit, reproducible manifests.
//!
//! `compose_manifest` picks `K` classes uniformly without replacement and
//! draws a near-uniform share of the `N` samples from each. `cluster_relabel`
//! is the alternative generation process: a fixed pool of points relabelled
//! into `K` groups by k-means.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, hash_str, SplitMix64, GENERATOR_ID};

/// Stream tags so class selection and per-class sampling never share draws.
const CLASS_STREAM: u64 = 0;
const SAMPLE_STREAM: u64 = 1;

/// Available classes and their samples. Class iteration order is sorted by identifier.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInventory {
    classes: BTreeMap<String, Vec<String>>,
}

impl ClassInventory {
    pub fn new(classes: BTreeMap<String, Vec<String>>) -> Result<Self> {
        for (class, samples) in &classes {
            let mut seen = HashSet::with_capacity(samples.len());
            for s in samples {
                if !seen.insert(s) {
                    return Err(Error::InvalidArgument(format!(
                        "duplicate sample {s:?} in class {class:?}"
                    )));
                }
            }
        }
        Ok(Self { classes })
    }

    /// Builds from `(class, sample)` rows; duplicate rows are rejected.
    pub fn from_pairs<I, C, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C, S)>,
        C: Into<String>,
        S: Into<String>,
    {
        let mut classes: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (c, s) in pairs {
            classes.entry(c.into()).or_default().push(s.into());
        }
        Self::new(classes)
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &BTreeMap<String, Vec<String>> {
        &self.classes
    }

    pub fn samples(&self, class: &str) -> Option<&[String]> {
        self.classes.get(class).map(Vec::as_slice)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestClass {
    pub class: String,
    pub samples: Vec<String>,
}

/// A concrete pre-training dataset. Classes are listed in selection order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    #[serde(rename = "N")]
    pub n_total: u64,
    #[serde(rename = "K")]
    pub k: u64,
    pub seed: u64,
    pub generator: String,
    pub entries: Vec<ManifestClass>,
}

impl DatasetManifest {
    /// Number of `(class, sample)` pairs.
    pub fn len(&self) -> usize {
        self.entries.iter().map(|e| e.samples.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().flat_map(|e| {
            e.samples
                .iter()
                .map(move |s| (e.class.as_str(), s.as_str()))
        })
    }

    pub fn per_class_counts(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.samples.len()).collect()
    }
}

/// Per-class allocation: the first `N mod K` classes get one extra sample.
fn allocation(n_total: u64, k: u64, index: usize) -> u64 {
    let base = n_total / k;
    let extra = n_total % k;
    base + u64::from((index as u64) < extra)
}

fn select_classes(inventory: &ClassInventory, k: u64, seed: u64) -> Result<Vec<&str>> {
    let available = inventory.num_classes() as u64;
    if k > available {
        return Err(Error::TooManyClasses { k, available });
    }
    let mut ids: Vec<&str> = inventory.classes.keys().map(String::as_str).collect();
    let mut rng = SplitMix64::new(derive_seed(seed, &[CLASS_STREAM]));
    rng.partial_shuffle(&mut ids, k as usize);
    ids.truncate(k as usize);
    Ok(ids)
}

/// Shuffled prefix of a class's sorted samples, long enough for `take` draws.
fn sample_class(
    inventory: &ClassInventory,
    class: &str,
    take: u64,
    seed: u64,
) -> Result<Vec<String>> {
    let samples = &inventory.classes[class];
    if take > samples.len() as u64 {
        return Err(Error::ClassShort {
            class: class.to_string(),
            needed: take,
            available: samples.len() as u64,
        });
    }
    let mut sorted: Vec<&String> = samples.iter().collect();
    sorted.sort();
    let mut rng = SplitMix64::new(derive_seed(seed, &[SAMPLE_STREAM, hash_str(class)]));
    rng.partial_shuffle(&mut sorted, take as usize);
    Ok(sorted[..take as usize]
        .iter()
        .map(|s| (*s).clone())
        .collect())
}

fn validate_size(n_total: u64, k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::NonPositive {
            what: "K",
            value: 0.0,
        });
    }
    if k > n_total {
        return Err(Error::SamplesPerClassBelowOne { n: n_total, k });
    }
    Ok(())
}

/// Selects `k` classes and `n_total` samples, deterministically for a given seed.
///
/// Fails naming the first selected class that cannot cover its allocation;
/// no substitute class is drawn.
pub fn compose_manifest(
    inventory: &ClassInventory,
    n_total: u64,
    k: u64,
    seed: u64,
) -> Result<DatasetManifest> {
    let mut chain = nested_compose(inventory, &[n_total], k, seed)?;
    Ok(chain.pop().expect("one budget yields one manifest"))
}

/// Manifests for ascending sizes at a fixed `k`, each a per-class prefix of the next.
pub fn nested_compose(
    inventory: &ClassInventory,
    budgets: &[u64],
    k: u64,
    seed: u64,
) -> Result<Vec<DatasetManifest>> {
    let Some(&largest) = budgets.last() else {
        return Err(Error::BadBudgetChain);
    };
    if budgets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadBudgetChain);
    }
    validate_size(budgets[0], k)?;

    let selected = select_classes(inventory, k, seed)?;
    let drawn: Vec<Vec<String>> = selected
        .iter()
        .enumerate()
        .map(|(i, class)| sample_class(inventory, class, allocation(largest, k, i), seed))
        .collect::<Result<_>>()?;

    Ok(budgets
        .iter()
        .map(|&n_total| DatasetManifest {
            n_total,
            k,
            seed,
            generator: GENERATOR_ID.to_string(),
            entries: selected
                .iter()
                .zip(&drawn)
                .enumerate()
                .map(|(i, (class, samples))| ManifestClass {
                    class: (*class).to_string(),
                    samples: samples[..allocation(n_total, k, i) as usize].to_vec(),
                })
                .collect(),
        })
        .collect())
}

/// Points with cluster labels in `[0, k)`, every label in use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPointSet {
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub k: usize,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squares after each iteration.
    pub wcss_history: Vec<f64>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lowest index wins ties.
fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter().enumerate() {
        let d = sq_dist(point, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best.0
}

/// Seeded first center, then repeatedly the point farthest from all chosen centers.
fn farthest_point_init(points: &[Vec<f64>], k: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = SplitMix64::new(seed);
    let first = rng.below(points.len() as u64) as usize;
    let mut chosen = vec![false; points.len()];
    chosen[first] = true;
    let mut centroids = vec![points[first].clone()];
    let mut d_min: Vec<f64> = points.iter().map(|p| sq_dist(p, &points[first])).collect();
    while centroids.len() < k {
        let mut pick = None::<(usize, f64)>;
        for (i, &d) in d_min.iter().enumerate() {
            if chosen[i] {
                continue;
            }
            if pick.is_none_or(|(_, best)| d > best) {
                pick = Some((i, d));
            }
        }
        let (idx, _) = pick.expect("at least k points");
        chosen[idx] = true;
        for (i, p) in points.iter().enumerate() {
            d_min[i] = d_min[i].min(sq_dist(p, &points[idx]));
        }
        centroids.push(points[idx].clone());
    }
    centroids
}

/// Lloyd's k-means with farthest-point seeding.
///
/// Stops once no centroid moves by `tol` or more (Euclidean), or after
/// `max_iters` iterations. An empty cluster takes over the point farthest
/// from its centroid among clusters that can spare one.
pub fn cluster_relabel(
    points: &[Vec<f64>],
    k: usize,
    seed: u64,
    max_iters: usize,
    tol: f64,
) -> Result<LabeledPointSet> {
    if k == 0 {
        return Err(Error::NonPositive {
            what: "K",
            value: 0.0,
        });
    }
    if points.len() < k {
        return Err(Error::TooFewPoints {
            k,
            points: points.len(),
        });
    }
    if max_iters == 0 {
        return Err(Error::NonPositive {
            what: "max_iters",
            value: 0.0,
        });
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tol must be >= 0, got {tol}"
        )));
    }
    let dim = points[0].len();
    for (index, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                index,
                expected: dim,
                got: p.len(),
            });
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "point {index} has a non-finite coordinate"
            )));
        }
    }

    let mut centroids = farthest_point_init(points, k, seed);
    let mut labels = vec![0usize; points.len()];
    let mut wcss_history = Vec::new();

    for _ in 0..max_iters {
        for (label, p) in labels.iter_mut().zip(points) {
            *label = nearest(p, &centroids);
        }

        let mut counts = vec![0usize; k];
        for &l in &labels {
            counts[l] += 1;
        }
        for empty in 0..k {
            if counts[empty] > 0 {
                continue;
            }
            let mut donor = None::<(usize, f64)>;
            for (i, p) in points.iter().enumerate() {
                if counts[labels[i]] < 2 {
                    continue;
                }
                let d = sq_dist(p, &centroids[labels[i]]);
                if donor.is_none_or(|(_, best)| d > best) {
                    donor = Some((i, d));
                }
            }
            let (i, _) = donor.expect("|points| >= k leaves a cluster with a spare point");
            counts[labels[i]] -= 1;
            counts[empty] = 1;
            labels[i] = empty;
            centroids[empty] = points[i].clone();
        }

        let mut sums = vec![vec![0.0; dim]; k];
        for (p, &l) in points.iter().zip(&labels) {
            for (s, v) in sums[l].iter_mut().zip(p) {
                *s += v;
            }
        }
        let mut movement: f64 = 0.0;
        for (j, sum) in sums.into_iter().enumerate() {
            let updated: Vec<f64> = sum.into_iter().map(|s| s / counts[j] as f64).collect();
            movement = movement.max(sq_dist(&updated, &centroids[j]).sqrt());
            centroids[j] = updated;
        }

        wcss_history.push(
            points
                .iter()
                .zip(&labels)
                .map(|(p, &l)| sq_dist(p, &centroids[l]))
                .sum(),
        );
        if movement < tol {
            break;
        }
    }

    Ok(LabeledPointSet {
        points: points.to_vec(),
        labels,
        k,
        centroids,
        wcss_history,
    })
}
