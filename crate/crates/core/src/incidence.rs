//! Point-curve configurations and their incidence matrices, with
//! certification, bounds and exponent fits built on top.

use std::collections::{BTreeMap, HashSet};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::algebra::poly::coefficient_from_json;
use crate::algebra::{CPoly, Field, GaussianRational, QPoly, Rational};
use crate::cr::{iota, realify_poly, ComplexCurve};
use crate::error::{AlgebraError, Error, Result};
use crate::partition::CrossingCurve;
use crate::seed::rng_for;

/// Schema tag written into every configuration document.
pub const CONFIG_SCHEMA: &str = "incidence-config/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroundField {
    R2,
    C2,
}

impl GroundField {
    /// Dimension of the real space the points live in.
    pub fn real_dim(self) -> usize {
        match self {
            GroundField::R2 => 2,
            GroundField::C2 => 4,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub generator: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    #[serde(default)]
    pub seed: u64,
}

/// Points and curves in ℝ² or ℂ². Real configurations keep every
/// coordinate and coefficient real.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub ground_field: GroundField,
    pub points: Vec<[GaussianRational; 2]>,
    pub curves: Vec<CPoly>,
    pub metadata: Metadata,
    /// Ambient real hypersurface in `(x1, y1, x2, y2)`, when the curves
    /// were generated as its leaves.
    pub hypersurface: Option<QPoly>,
}

#[derive(Serialize, Deserialize)]
struct ConfigDoc<C> {
    schema: String,
    ground_field: GroundField,
    metadata: Metadata,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hypersurface: Option<QPoly>,
    points: Vec<[Value; 2]>,
    curves: Vec<C>,
}

fn is_real(z: &GaussianRational) -> bool {
    z.im.is_zero()
}

impl Configuration {
    /// Validated configuration with duplicate points and curves (up to a
    /// scalar) removed, first occurrence kept.
    pub fn new(
        ground_field: GroundField,
        points: Vec<[GaussianRational; 2]>,
        curves: Vec<CPoly>,
        metadata: Metadata,
    ) -> Result<Self> {
        let mut c = Configuration {
            ground_field,
            points,
            curves,
            metadata,
            hypersurface: None,
        };
        c.validate()?;
        c.dedup();
        Ok(c)
    }

    /// Real configuration from rational points and curves over ℚ.
    pub fn real(points: Vec<[Rational; 2]>, curves: Vec<QPoly>, metadata: Metadata) -> Result<Self> {
        let points = points
            .into_iter()
            .map(|[x, y]| [GaussianRational::from(x), GaussianRational::from(y)])
            .collect();
        let curves = curves.iter().map(QPoly::to_gaussian).collect();
        Configuration::new(GroundField::R2, points, curves, metadata)
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn n(&self) -> usize {
        self.curves.len()
    }

    pub fn max_degree(&self) -> u32 {
        self.curves.iter().map(CPoly::total_degree).max().unwrap_or(0)
    }

    /// Checks that curves are well formed for the ground field; duplicates
    /// are allowed.
    pub fn validate(&self) -> Result<()> {
        for (j, f) in self.curves.iter().enumerate() {
            if f.nvars() != 2 {
                return Err(Error::InvalidInput(format!(
                    "curve {j} has {} variables, expected 2",
                    f.nvars()
                )));
            }
            if f.is_zero() {
                return Err(Error::InvalidInput(format!("curve {j} is the zero polynomial")));
            }
            if self.ground_field == GroundField::R2 && f.terms().any(|(_, c)| !is_real(c)) {
                return Err(Error::InvalidInput(format!(
                    "curve {j} has a non-real coefficient in a real configuration"
                )));
            }
        }
        if self.ground_field == GroundField::R2 {
            if let Some(i) = self.points.iter().position(|p| !is_real(&p[0]) || !is_real(&p[1])) {
                return Err(Error::InvalidInput(format!(
                    "point {i} is not real in a real configuration"
                )));
            }
        }
        if let Some(h) = &self.hypersurface {
            if h.nvars() != 4 || h.is_zero() {
                return Err(Error::InvalidInput(
                    "hypersurface must be a nonzero polynomial in 4 variables".into(),
                ));
            }
        }
        Ok(())
    }

    /// Removes repeated points and curves proportional to earlier ones.
    pub fn dedup(&mut self) {
        let mut seen = HashSet::new();
        self.points.retain(|p| seen.insert(p.clone()));
        let mut seen = HashSet::new();
        self.curves.retain(|f| seen.insert(f.normalized()));
    }

    /// Points as rationals; `None` for a complex configuration.
    pub fn real_points(&self) -> Option<Vec<[Rational; 2]>> {
        if self.ground_field != GroundField::R2 {
            return None;
        }
        Some(
            self.points
                .iter()
                .map(|[x, y]| [x.re.clone(), y.re.clone()])
                .collect(),
        )
    }

    /// Points in ℝ² or, through ι, in ℝ⁴.
    pub fn lifted_points(&self) -> Vec<Vec<Rational>> {
        match self.ground_field {
            GroundField::R2 => self
                .points
                .iter()
                .map(|[x, y]| vec![x.re.clone(), y.re.clone()])
                .collect(),
            GroundField::C2 => self.points.iter().map(|p| iota(p).to_vec()).collect(),
        }
    }

    /// Curves in the form used for partition crossing statistics.
    pub fn crossing_curves(&self) -> Result<Vec<CrossingCurve>> {
        self.curves
            .iter()
            .map(|f| match self.ground_field {
                GroundField::R2 => Ok(CrossingCurve::Planar(f.split_re_im().0)),
                GroundField::C2 => Ok(CrossingCurve::Embedded(ComplexCurve::from_poly(f.clone())?)),
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let point_value = |z: &GaussianRational| match self.ground_field {
            GroundField::R2 => serde_json::to_value(&z.re),
            GroundField::C2 => serde_json::to_value(z),
        };
        let points: Vec<[Value; 2]> = self
            .points
            .iter()
            .map(|[a, b]| [point_value(a).expect("rational"), point_value(b).expect("rational")])
            .collect();
        fn doc<C>(c: &Configuration, points: Vec<[Value; 2]>, curves: Vec<C>) -> ConfigDoc<C> {
            ConfigDoc {
                schema: CONFIG_SCHEMA.to_string(),
                ground_field: c.ground_field,
                metadata: c.metadata.clone(),
                hypersurface: c.hypersurface.clone(),
                points,
                curves,
            }
        }
        let mut s = match self.ground_field {
            GroundField::R2 => {
                let real: Vec<QPoly> = self.curves.iter().map(|f| f.split_re_im().0).collect();
                serde_json::to_string_pretty(&doc(self, points, real))
            }
            GroundField::C2 => serde_json::to_string_pretty(&doc(self, points, self.curves.clone())),
        }
        .expect("serializable");
        s.push('\n');
        s
    }

    /// Parses and validates a configuration document. Duplicates are kept
    /// so that certification sees the arrangement as written.
    pub fn from_json(src: &str) -> Result<Self> {
        let doc: ConfigDoc<CPoly> = serde_json::from_str(src)?;
        if doc.schema != CONFIG_SCHEMA {
            return Err(Error::InvalidInput(format!(
                "unsupported schema {:?}, expected {CONFIG_SCHEMA:?}",
                doc.schema
            )));
        }
        let points = doc
            .points
            .iter()
            .enumerate()
            .map(|(i, [a, b])| {
                let a = coefficient_from_json(a);
                let b = coefficient_from_json(b);
                match (a, b) {
                    (Ok(a), Ok(b)) => Ok([a, b]),
                    (Err(e), _) | (_, Err(e)) => {
                        Err(Error::InvalidInput(format!("point {i}: {e}")))
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let c = Configuration {
            ground_field: doc.ground_field,
            points,
            curves: doc.curves,
            metadata: doc.metadata,
            hypersurface: doc.hypersurface,
        };
        c.validate()?;
        Ok(c)
    }
}

/// Sparse 0/1 matrix of incidences between points (rows) and curves
/// (columns), stored as sorted `(point, curve)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceMatrix {
    pub m: usize,
    pub n: usize,
    pub incidences: Vec<(usize, usize)>,
}

impl IncidenceMatrix {
    pub fn new(m: usize, n: usize, mut incidences: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(i, j)) = incidences.iter().find(|&&(i, j)| i >= m || j >= n) {
            return Err(Error::InvalidInput(format!(
                "incidence ({i}, {j}) outside a {m} x {n} matrix"
            )));
        }
        incidences.par_sort_unstable();
        incidences.dedup();
        Ok(IncidenceMatrix { m, n, incidences })
    }

    pub fn count(&self) -> usize {
        self.incidences.len()
    }

    pub fn contains(&self, point: usize, curve: usize) -> bool {
        self.incidences.binary_search(&(point, curve)).is_ok()
    }

    /// Incident points of every curve, ascending.
    pub fn curve_points(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for &(i, j) in &self.incidences {
            out[j].push(i);
        }
        out
    }

    /// Incident curves of every point, ascending.
    pub fn point_curves(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.m];
        for &(i, j) in &self.incidences {
            out[i].push(j);
        }
        out
    }

    pub fn curve_degrees(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for &(_, j) in &self.incidences {
            out[j] += 1;
        }
        out
    }

    /// Sparse pair list with a `point,curve` header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("point,curve\n");
        for (i, j) in &self.incidences {
            s.push_str(&format!("{i},{j}\n"));
        }
        s
    }
}

/// Exact incidence matrix: `(i, j)` is present iff curve `j` vanishes at
/// point `i`.
pub fn build_matrix(config: &Configuration) -> IncidenceMatrix {
    let int_points: Vec<Option<IntPoint>> = config.points.par_iter().map(IntPoint::of).collect();
    let int_curves: Vec<Option<IntCurve>> = config.curves.par_iter().map(IntCurve::of).collect();
    let pairs: Vec<(usize, usize)> = (0..config.n())
        .into_par_iter()
        .flat_map_iter(|j| {
            let (f, fi) = (&config.curves[j], &int_curves[j]);
            config.points.iter().zip(&int_points).enumerate().filter_map(move |(i, (p, pi))| {
                let fast = match (fi, pi) {
                    (Some(fi), Some(pi)) => fi.vanishes_at(pi),
                    _ => None,
                };
                let zero = fast.unwrap_or_else(|| f.eval(p).expect("two coordinates").is_zero());
                zero.then_some((i, j))
            })
        })
        .collect();
    IncidenceMatrix::new(config.m(), config.n(), pairs).expect("indices in range")
}

type C128 = (i128, i128);

fn cmul(a: C128, b: C128) -> Option<C128> {
    let re = a.0.checked_mul(b.0)?.checked_sub(a.1.checked_mul(b.1)?)?;
    let im = a.0.checked_mul(b.1)?.checked_add(a.1.checked_mul(b.0)?)?;
    Some((re, im))
}

fn small(x: &BigInt) -> Option<i128> {
    i64::try_from(x).ok().map(i128::from)
}

fn lcm_of<'a>(dens: impl Iterator<Item = &'a BigInt>) -> BigInt {
    dens.fold(BigInt::from(1), |acc, d| num_integer::Integer::lcm(&acc, d))
}

/// Point with Gaussian-integer numerators over one common denominator.
struct IntPoint {
    num: [C128; 2],
    den: i128,
}

impl IntPoint {
    fn of(p: &[GaussianRational; 2]) -> Option<Self> {
        let parts = [&p[0].re, &p[0].im, &p[1].re, &p[1].im];
        let den = lcm_of(parts.iter().map(|q| q.denom()));
        let scaled: Vec<i128> = parts
            .iter()
            .map(|q| small(&(q.numer() * (&den / q.denom()))))
            .collect::<Option<_>>()?;
        Some(IntPoint {
            num: [(scaled[0], scaled[1]), (scaled[2], scaled[3])],
            den: small(&den)?,
        })
    }
}

/// Curve with Gaussian-integer coefficients, evaluated homogeneously.
struct IntCurve {
    terms: Vec<([u32; 2], C128)>,
    degree: u32,
}

impl IntCurve {
    fn of(f: &CPoly) -> Option<Self> {
        let den = lcm_of(f.terms().flat_map(|(_, c)| [c.re.denom(), c.im.denom()]));
        let terms = f
            .terms()
            .map(|(m, c)| {
                let e = m.exps();
                let re = small(&(c.re.numer() * (&den / c.re.denom())))?;
                let im = small(&(c.im.numer() * (&den / c.im.denom())))?;
                Some(([e[0], e[1]], (re, im)))
            })
            .collect::<Option<_>>()?;
        Some(IntCurve {
            terms,
            degree: f.total_degree(),
        })
    }

    /// `Some(f(p) = 0)`, or `None` on overflow.
    fn vanishes_at(&self, p: &IntPoint) -> Option<bool> {
        let powers = |b: C128| -> Option<Vec<C128>> {
            let mut out = vec![(1, 0)];
            for _ in 0..self.degree {
                out.push(cmul(*out.last()?, b)?);
            }
            Some(out)
        };
        let (p1, p2, pd) = (powers(p.num[0])?, powers(p.num[1])?, powers((p.den, 0))?);
        let mut acc: C128 = (0, 0);
        for ([e1, e2], c) in &self.terms {
            let rest = self.degree - e1 - e2;
            let t = cmul(cmul(cmul(*c, p1[*e1 as usize])?, p2[*e2 as usize])?, pd[rest as usize])?;
            acc = (acc.0.checked_add(t.0)?, acc.1.checked_add(t.1)?);
        }
        Some(acc == (0, 0))
    }
}

/// As [`build_matrix`], additionally requiring `u(ι(p)) = v(ι(p)) = 0` to
/// agree with the complex test at every pair.
pub fn build_matrix_embedded(config: &Configuration) -> IncidenceMatrix {
    let matrix = build_matrix(config);
    let lifted: Vec<Vec<Rational>> = config.points.iter().map(|p| iota(p).to_vec()).collect();
    let pairs: Vec<_> = config.curves.iter().map(realify_poly).collect();
    let real: Vec<(usize, usize)> = (0..config.n())
        .into_par_iter()
        .flat_map_iter(|j| {
            let pair = &pairs[j];
            lifted.iter().enumerate().filter_map(move |(i, p)| {
                let u = pair.u.eval(p).expect("four coordinates");
                let v = pair.v.eval(p).expect("four coordinates");
                (u.is_zero() && v.is_zero()).then_some((i, j))
            })
        })
        .collect();
    let real = IncidenceMatrix::new(config.m(), config.n(), real).expect("indices in range");
    assert_eq!(matrix, real, "complex and realified incidence tests disagree");
    matrix
}

/// Default cap on k-subset table entries and on curve-pair records.
pub const DOF_TABLE_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DofStatus {
    Certified,
    Violated,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A k-subset of points lying on more than `s` curves.
    Subset { points: Vec<usize>, curves: Vec<usize> },
    /// Two curves sharing more than `s` incident points.
    CurvePair { curves: [usize; 2], shared: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DofCertificate {
    pub k: usize,
    pub s: usize,
    pub status: DofStatus,
    /// At most one witness per violated condition, subset condition first.
    pub witnesses: Vec<Witness>,
    /// Entries the k-subset table needs.
    pub subset_entries: u64,
    /// Curve-pair records the intersection check needs.
    pub pair_entries: u64,
    pub cap: u64,
}

impl DofCertificate {
    pub fn witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }

    /// Re-checks every witness against the matrix alone.
    pub fn verify_witnesses(&self, matrix: &IncidenceMatrix) -> bool {
        self.witnesses.iter().all(|w| match w {
            Witness::Subset { points, curves } => {
                points.len() == self.k
                    && curves.len() > self.s
                    && curves
                        .iter()
                        .all(|&j| points.iter().all(|&i| matrix.contains(i, j)))
            }
            Witness::CurvePair { curves: [a, b], shared } => {
                a != b
                    && shared.len() > self.s
                    && shared
                        .iter()
                        .all(|&i| matrix.contains(i, *a) && matrix.contains(i, *b))
            }
        })
    }
}

fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn saturate(x: u128) -> u64 {
    x.min(u64::MAX as u128) as u64
}

fn for_each_subset(items: &[usize], k: usize, mut f: impl FnMut(&[usize])) {
    let n = items.len();
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        let mut p = k;
        while p > 0 && idx[p - 1] == n - k + p - 1 {
            p -= 1;
        }
        if p == 0 {
            return;
        }
        idx[p - 1] += 1;
        for q in p..k {
            idx[q] = idx[q - 1] + 1;
        }
        for q in p - 1..k {
            buf[q] = items[idx[q]];
        }
    }
}

/// Checks that every k-subset of points lies on at most `s` curves and
/// that any two curves share at most `s` incident points.
pub fn certify_dof(matrix: &IncidenceMatrix, k: usize, s: usize) -> Result<DofCertificate> {
    certify_dof_with_cap(matrix, k, s, DOF_TABLE_CAP)
}

pub fn certify_dof_with_cap(matrix: &IncidenceMatrix, k: usize, s: usize, cap: u64) -> Result<DofCertificate> {
    if k == 0 || s == 0 {
        return Err(Error::InvalidInput("k and s must be at least 1".into()));
    }
    let curve_points = matrix.curve_points();
    let point_curves = matrix.point_curves();
    let subset_entries = saturate(
        curve_points
            .iter()
            .map(|p| binomial_u128(p.len() as u64, k as u64))
            .fold(0u128, u128::saturating_add),
    );
    let pair_entries = saturate(
        point_curves
            .iter()
            .map(|c| binomial_u128(c.len() as u64, 2))
            .fold(0u128, u128::saturating_add),
    );
    let mut witnesses = Vec::new();
    let mut indeterminate = false;
    if subset_entries > cap {
        indeterminate = true;
    } else if let Some(w) = subset_violation(&curve_points, k, s, subset_entries as usize) {
        witnesses.push(w);
    }
    if pair_entries > cap {
        indeterminate = true;
    } else if let Some(w) = pair_violation(&curve_points, &point_curves, s) {
        witnesses.push(w);
    }
    let status = if !witnesses.is_empty() {
        DofStatus::Violated
    } else if indeterminate {
        DofStatus::Indeterminate
    } else {
        DofStatus::Certified
    };
    let cert = DofCertificate {
        k,
        s,
        status,
        witnesses,
        subset_entries,
        pair_entries,
        cap,
    };
    if status == DofStatus::Certified {
        let report = kst_double_count(matrix, k, s);
        assert!(report.holds, "certified arrangement violates double counting");
    }
    Ok(cert)
}

fn subset_violation(curve_points: &[Vec<usize>], k: usize, s: usize, entries: usize) -> Option<Witness> {
    let per_curve: Vec<Vec<usize>> = curve_points
        .par_iter()
        .map(|pts| {
            let mut flat = Vec::new();
            for_each_subset(pts, k, |sub| flat.extend_from_slice(sub));
            flat
        })
        .collect();
    let mut keys: Vec<usize> = Vec::with_capacity(entries * k);
    let mut owner: Vec<usize> = Vec::with_capacity(entries);
    for (j, flat) in per_curve.into_iter().enumerate() {
        owner.extend(std::iter::repeat_n(j, flat.len() / k.max(1)));
        keys.extend(flat);
    }
    let key = |e: usize| &keys[e * k..(e + 1) * k];
    let mut order: Vec<usize> = (0..owner.len()).collect();
    order.par_sort_unstable_by(|&a, &b| key(a).cmp(key(b)).then(owner[a].cmp(&owner[b])));
    let mut best: Option<(usize, &[usize], Vec<usize>)> = None;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && key(order[end]) == key(order[start]) {
            end += 1;
        }
        if end - start > s {
            let trigger = owner[order[start + s]];
            let sub = key(order[start]);
            let better = match &best {
                None => true,
                Some((t, b, _)) => (trigger, sub) < (*t, *b),
            };
            if better {
                let curves = order[start..end].iter().map(|&e| owner[e]).collect();
                best = Some((trigger, sub, curves));
            }
        }
        start = end;
    }
    best.map(|(_, sub, curves)| Witness::Subset {
        points: sub.to_vec(),
        curves,
    })
}

fn pair_violation(curve_points: &[Vec<usize>], point_curves: &[Vec<usize>], s: usize) -> Option<Witness> {
    let mut pairs: Vec<(usize, usize)> = point_curves
        .par_iter()
        .flat_map_iter(|cs| {
            (0..cs.len()).flat_map(move |a| (a + 1..cs.len()).map(move |b| (cs[a], cs[b])))
        })
        .collect();
    pairs.par_sort_unstable();
    let first = pairs
        .chunk_by(|x, y| x == y)
        .find(|run| run.len() > s)
        .map(|run| run[0])?;
    let (a, b) = first;
    let other: HashSet<usize> = curve_points[b].iter().copied().collect();
    let shared = curve_points[a].iter().copied().filter(|i| other.contains(i)).collect();
    Some(Witness::CurvePair { curves: [a, b], shared })
}

fn big_string<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Both sides of `Σ_curves C(deg, k) ≤ s·C(m, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KstReport {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub s: usize,
    #[serde(serialize_with = "big_string")]
    pub lhs: BigInt,
    #[serde(serialize_with = "big_string")]
    pub rhs: BigInt,
    pub holds: bool,
}

pub fn kst_double_count(matrix: &IncidenceMatrix, k: usize, s: usize) -> KstReport {
    let lhs: BigInt = matrix
        .curve_degrees()
        .iter()
        .map(|&d| num_integer::binomial(BigInt::from(d), BigInt::from(k)))
        .sum();
    let rhs = BigInt::from(s) * num_integer::binomial(BigInt::from(matrix.m), BigInt::from(k));
    let holds = lhs <= rhs;
    KstReport {
        m: matrix.m,
        n: matrix.n,
        k,
        s,
        lhs,
        rhs,
        holds,
    }
}

/// Significand bits used for bound formulas.
pub const BOUND_PRECISION_BITS: usize = 128;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundInput {
    pub m: u64,
    pub n: u64,
    pub k: u32,
    pub s: u32,
    pub epsilon: f64,
    pub measured: u64,
    /// Constant on the first term of the complex bound.
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub m: u64,
    pub n: u64,
    pub k: u32,
    pub s: u32,
    pub epsilon: f64,
    pub constant: f64,
    pub measured: u64,
    pub precision_bits: usize,
    pub ps_first_term: f64,
    pub ps_value: f64,
    pub ps_complex_first_term: f64,
    pub ps_complex_value: f64,
    pub kst_value: f64,
    pub ratio_ps: f64,
    pub ratio_ps_complex: f64,
    pub ratio_kst: f64,
    /// Whether `n ≤ m^k`.
    pub kst_regime: bool,
}

struct Hp {
    p: usize,
    rm: RoundingMode,
    cc: Consts,
}

impl Hp {
    fn new() -> Self {
        Hp {
            p: BOUND_PRECISION_BITS,
            rm: RoundingMode::ToEven,
            cc: Consts::new().expect("constant cache"),
        }
    }

    fn int(&self, x: u64) -> BigFloat {
        BigFloat::from_word(x, self.p)
    }

    fn ratio(&self, a: u64, b: u64) -> BigFloat {
        self.int(a).div(&self.int(b), self.p, self.rm)
    }

    fn pow(&mut self, base: &BigFloat, e: &BigFloat) -> BigFloat {
        base.pow(e, self.p, self.rm, &mut self.cc)
    }

    fn f64_of(&mut self, x: &BigFloat) -> f64 {
        let s = x
            .format(Radix::Dec, RoundingMode::ToEven, &mut self.cc)
            .expect("finite value");
        s.parse().unwrap_or(f64::NAN)
    }
}

pub fn evaluate_bounds(input: &BoundInput) -> Result<BoundReport> {
    let BoundInput {
        m,
        n,
        k,
        s,
        epsilon,
        measured,
        constant,
    } = input.clone();
    if m == 0 || n == 0 || k == 0 {
        return Err(Error::InvalidInput("m, n and k must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidInput(format!("epsilon {epsilon} outside [0, 1)")));
    }
    if !(constant.is_finite() && constant > 0.0) {
        return Err(Error::InvalidInput(format!("constant {constant} must be positive")));
    }
    let mut hp = Hp::new();
    let (p, rm) = (hp.p, hp.rm);
    let k64 = u64::from(k);
    let bm = hp.int(m);
    let bn = hp.int(n);
    let em = hp.ratio(k64, 2 * k64 - 1);
    let en = hp.ratio(2 * k64 - 2, 2 * k64 - 1);
    let mn_sum = bm.add(&bn, p, rm);
    let m_part = hp.pow(&bm, &em);
    let n_part = hp.pow(&bn, &en);
    let first = m_part.mul(&n_part, p, rm);
    let ps = first.add(&mn_sum, p, rm);
    let em_eps = em.add(&BigFloat::from_f64(epsilon, p), p, rm);
    let m_eps = hp.pow(&bm, &em_eps);
    let complex_first = m_eps.mul(&n_part, p, rm);
    let complex = complex_first
        .mul(&BigFloat::from_f64(constant, p), p, rm)
        .add(&mn_sum, p, rm);
    let kst_exp = hp.int(1).sub(&hp.ratio(1, k64), p, rm);
    let kst = bm.mul(&hp.pow(&bn, &kst_exp), p, rm).add(&bn, p, rm);
    let bi = hp.int(measured);
    let ratio_ps = bi.div(&ps, p, rm);
    let ratio_complex = bi.div(&complex, p, rm);
    let ratio_kst = bi.div(&kst, p, rm);
    let kst_regime = BigInt::from(n) <= BigInt::from(m).pow(k);
    Ok(BoundReport {
        m,
        n,
        k,
        s,
        epsilon,
        constant,
        measured,
        precision_bits: BOUND_PRECISION_BITS,
        ps_first_term: hp.f64_of(&first),
        ps_value: hp.f64_of(&ps),
        ps_complex_first_term: hp.f64_of(&complex_first),
        ps_complex_value: hp.f64_of(&complex),
        kst_value: hp.f64_of(&kst),
        ratio_ps: hp.f64_of(&ratio_ps),
        ratio_ps_complex: hp.f64_of(&ratio_complex),
        ratio_kst: hp.f64_of(&ratio_kst),
        kst_regime,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub m: f64,
    pub n: f64,
    #[serde(alias = "I")]
    pub i: f64,
}

/// Least-squares fit of `log I ≈ a·log m + b·log n + c`. On a degenerate
/// design the fit is `log I ≈ γ·(log m + log n)/2 + c` with `a = b = γ/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// `a + b`.
    pub combined: f64,
    pub degenerate: bool,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    pub points: usize,
}

impl FitReport {
    pub fn predict(&self, m: f64, n: f64) -> f64 {
        (self.a * m.ln() + self.b * n.ln() + self.c).exp()
    }
}

pub fn exponent_fit(series: &[SeriesPoint]) -> Result<FitReport> {
    if series.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "exponent fit needs at least 3 points, got {}",
            series.len()
        )));
    }
    if let Some(p) = series
        .iter()
        .find(|p| !(p.i >= 1.0 && p.m >= 1.0 && p.n >= 1.0 && p.i.is_finite()))
    {
        return Err(Error::InvalidInput(format!(
            "series point ({}, {}, {}) needs m, n, I ≥ 1",
            p.m, p.n, p.i
        )));
    }
    let len = series.len();
    let lm: Vec<f64> = series.iter().map(|p| p.m.ln()).collect();
    let ln: Vec<f64> = series.iter().map(|p| p.n.ln()).collect();
    let li: Vec<f64> = series.iter().map(|p| p.i.ln()).collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / len as f64;
    let (mm, mn) = (mean(&lm), mean(&ln));
    let (mut smm, mut snn, mut smn) = (0.0, 0.0, 0.0);
    for t in 0..len {
        let (x, y) = (lm[t] - mm, ln[t] - mn);
        smm += x * x;
        snn += y * y;
        smn += x * y;
    }
    let det = smm * snn - smn * smn;
    let degenerate = smm <= 1e-24 || snn <= 1e-24 || det <= 1e-10 * smm * snn;
    let (a, b, c) = if degenerate {
        let t: Vec<f64> = (0..len).map(|q| (lm[q] + ln[q]) / 2.0).collect();
        let (mt, mi) = (mean(&t), mean(&li));
        let stt: f64 = t.iter().map(|x| (x - mt) * (x - mt)).sum();
        let sti: f64 = (0..len).map(|q| (t[q] - mt) * (li[q] - mi)).sum();
        let gamma = if stt <= 1e-24 { 0.0 } else { sti / stt };
        (gamma / 2.0, gamma / 2.0, mi - gamma * mt)
    } else {
        let design = DMatrix::from_fn(len, 3, |r, col| match col {
            0 => lm[r],
            1 => ln[r],
            _ => 1.0,
        });
        let rhs = DVector::from_vec(li.clone());
        let sol = design
            .svd(true, true)
            .solve(&rhs, 1e-14)
            .map_err(|e| Error::InvalidInput(format!("least squares failed: {e}")))?;
        (sol[0], sol[1], sol[2])
    };
    let residual = ((0..len)
        .map(|q| {
            let r = li[q] - (a * lm[q] + b * ln[q] + c);
            r * r
        })
        .sum::<f64>()
        / len as f64)
        .sqrt();
    Ok(FitReport {
        a,
        b,
        c,
        combined: a + b,
        degenerate,
        residual,
        points: len,
    })
}

/// Number of fresh maps tried by [`project_generic`].
pub const PROJECTION_BUDGET: usize = 100;

pub type ProjectionMatrix = [[Rational; 4]; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub matrix: ProjectionMatrix,
    pub points: Vec<[Rational; 2]>,
    pub injective: bool,
    /// Maps drawn, including the accepted one.
    pub attempts: usize,
}

pub fn project_with(matrix: &ProjectionMatrix, points: &[[Rational; 4]]) -> Vec<[Rational; 2]> {
    points
        .par_iter()
        .map(|p| {
            let row = |r: &[Rational; 4]| -> Rational {
                r.iter().zip(p).fold(Rational::zero(), |acc, (a, x)| acc + &(a.clone() * x))
            };
            [row(&matrix[0]), row(&matrix[1])]
        })
        .collect()
}

/// First pair of points (lowest indices in sorted image order) sharing an
/// image, or `None` when the map is injective on them.
pub fn projection_collision(matrix: &ProjectionMatrix, points: &[[Rational; 4]]) -> Option<(usize, usize)> {
    let image = project_with(matrix, points);
    let mut order: Vec<usize> = (0..image.len()).collect();
    order.par_sort_unstable_by(|&a, &b| image[a].cmp(&image[b]).then(a.cmp(&b)));
    order
        .windows(2)
        .find(|w| image[w[0]] == image[w[1]])
        .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
}

/// Seeded rational 2×4 map for attempt `attempt`.
pub fn random_projection(seed: u64, attempt: u64) -> ProjectionMatrix {
    let mut rng = rng_for(seed, "project-generic", attempt);
    let mut entry = || {
        let num: i64 = rng.gen_range(-64..=64);
        let den: i64 = rng.gen_range(1..=64);
        Rational::new(num, den).expect("nonzero denominator")
    };
    [
        [entry(), entry(), entry(), entry()],
        [entry(), entry(), entry(), entry()],
    ]
}

/// Generic linear projection ℚ⁴ → ℚ² that is injective on `points`.
pub fn project_generic(points: &[[Rational; 4]], seed: u64) -> Result<Projection> {
    let mut last = (0, 0);
    for attempt in 0..PROJECTION_BUDGET {
        let matrix = random_projection(seed, attempt as u64);
        match projection_collision(&matrix, points) {
            None => {
                let image = project_with(&matrix, points);
                return Ok(Projection {
                    matrix,
                    points: image,
                    injective: true,
                    attempts: attempt + 1,
                });
            }
            Some(pair) => last = pair,
        }
    }
    Err(Error::ProjectionCollision {
        i: last.0,
        j: last.1,
        attempts: PROJECTION_BUDGET,
    })
}

/// Parses a bare polynomial over ℚ(i) in `z1, z2`.
pub fn parse_complex_curve(src: &str) -> Result<CPoly> {
    CPoly::parse(src, &crate::algebra::poly::COMPLEX_VARS).map_err(|e: AlgebraError| e.into())
}
