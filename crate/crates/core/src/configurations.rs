//! Deterministic generators for structured and random configurations.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::poly::{Monomial, COMPLEX_VARS, PLANE_VARS};
use crate::algebra::{CPoly, Field, GaussianRational, MultiPoly, QPoly, Rational};
use crate::cr::{realify_poly, ComplexCurve};
use crate::error::{Error, Result};
use crate::foliation::{containment_check, Hypersurface};
use crate::incidence::{build_matrix, certify_dof, Configuration, DofStatus, GroundField, Metadata};
use crate::seed::rng_for;

/// Regeneration attempts for certified generators.
pub const REGENERATE_BUDGET: u64 = 50;

/// Denominator of random coordinates.
pub const RANDOM_DENOMINATOR: i64 = 1 << 20;

fn default_samples() -> u32 {
    10
}

fn default_degree() -> u32 {
    1
}

fn default_field() -> GroundField {
    GroundField::R2
}

/// A generator family with its scale parameters and seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorSpec {
    GridLines {
        n: u32,
    },
    UnitCircles {
        n: u32,
        #[serde(default)]
        seed: u64,
    },
    ComplexProduct {
        a: u32,
        b: u32,
        #[serde(default)]
        seed: u64,
    },
    Leaf {
        g: String,
        count: u32,
        #[serde(default = "default_samples")]
        samples: u32,
        #[serde(default)]
        seed: u64,
    },
    Random {
        m: u32,
        n: u32,
        #[serde(default = "default_degree")]
        degree: u32,
        #[serde(default = "default_field")]
        ground_field: GroundField,
        #[serde(default)]
        seed: u64,
    },
}

impl GeneratorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::GridLines { .. } => "grid-lines",
            GeneratorSpec::UnitCircles { .. } => "unit-circles",
            GeneratorSpec::ComplexProduct { .. } => "complex-product",
            GeneratorSpec::Leaf { .. } => "leaf",
            GeneratorSpec::Random { .. } => "random",
        }
    }
}

/// Runs the generator named by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<Configuration> {
    match spec {
        GeneratorSpec::GridLines { n } => gen_grid_lines(*n),
        GeneratorSpec::UnitCircles { n, seed } => gen_unit_circles(*n, *seed),
        GeneratorSpec::ComplexProduct { a, b, seed } => gen_complex_lines_product(*a, *b, *seed),
        GeneratorSpec::Leaf {
            g,
            count,
            samples,
            seed,
        } => {
            let g = CPoly::parse(g, &COMPLEX_VARS)?;
            Ok(gen_leaf_family(&g, *count, *samples, *seed)?.config)
        }
        GeneratorSpec::Random {
            m,
            n,
            degree,
            ground_field,
            seed,
        } => gen_random(*m, *n, *degree, *ground_field, *seed),
    }
}

fn metadata(generator: &str, params: Value, seed: u64) -> Metadata {
    let params: BTreeMap<String, Value> = match params {
        Value::Object(map) => map.into_iter().collect(),
        _ => BTreeMap::new(),
    };
    Metadata {
        generator: generator.to_string(),
        params,
        seed,
    }
}

fn q(n: i64) -> Rational {
    Rational::from(n)
}

fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

fn z(re: Rational, im: Rational) -> GaussianRational {
    GaussianRational::new(re, im)
}

fn require_positive(name: &str, v: u32) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidInput(format!("{name} must be at least 1")));
    }
    Ok(())
}

fn ensure_certified(config: &Configuration, k: usize, s: usize) -> Result<bool> {
    let cert = certify_dof(&build_matrix(config), k, s)?;
    Ok(cert.status == DofStatus::Certified)
}

/// Grid `{1..N} × {1..2N²}` with the `N³` lines `y = ax + b`,
/// `a ∈ {1..N}`, `b ∈ {1..N²}`.
pub fn gen_grid_lines(n: u32) -> Result<Configuration> {
    require_positive("N", n)?;
    let n = i64::from(n);
    let mut points = Vec::with_capacity((2 * n * n * n) as usize);
    for x in 1..=n {
        for y in 1..=2 * n * n {
            points.push([q(x), q(y)]);
        }
    }
    let (x, y) = (QPoly::var(2, 0), QPoly::var(2, 1));
    let mut lines = Vec::with_capacity((n * n * n) as usize);
    for a in 1..=n {
        for b in 1..=n * n {
            lines.push(&(&y - &x.scale(&q(a))) - &QPoly::constant(2, q(b)));
        }
    }
    Configuration::real(points, lines, metadata("grid-lines", json!({ "n": n }), 0))
}

/// Unit circle centred at `(a, b)`.
pub fn unit_circle(a: &Rational, b: &Rational) -> QPoly {
    let (x, y) = (QPoly::var(2, 0), QPoly::var(2, 1));
    let dx = &x - &QPoly::constant(2, a.clone());
    let dy = &y - &QPoly::constant(2, b.clone());
    &(&(&dx * &dx) + &(&dy * &dy)) - &QPoly::one(2)
}

/// `N²` unit circles centred on a seeded translate of the integer grid,
/// each carrying one point at a seeded unit offset from its centre.
pub fn gen_unit_circles(n: u32, seed: u64) -> Result<Configuration> {
    require_positive("N", n)?;
    let offsets = [(q(1), q(0)), (frac(3, 5), frac(4, 5))];
    for attempt in 0..REGENERATE_BUDGET {
        let mut rng = rng_for(seed, "unit-circles", attempt);
        let tx = frac(rng.gen_range(0..97), 97);
        let ty = frac(rng.gen_range(0..97), 97);
        let mut points = Vec::new();
        let mut circles = Vec::new();
        for i in 0..i64::from(n) {
            for j in 0..i64::from(n) {
                let (cx, cy) = (tx.clone() + &q(i), ty.clone() + &q(j));
                let (ux, uy) = &offsets[rng.gen_range(0..offsets.len())];
                points.push([cx.clone() + ux, cy.clone() + uy]);
                circles.push(unit_circle(&cx, &cy));
            }
        }
        let config = Configuration::real(
            points,
            circles,
            metadata("unit-circles", json!({ "n": n, "attempt": attempt }), seed),
        )?;
        if ensure_certified(&config, 3, 2)? {
            return Ok(config);
        }
    }
    Err(Error::BudgetExhausted(format!(
        "no certified unit-circle arrangement after {REGENERATE_BUDGET} attempts"
    )))
}

/// Points `A × B` with `A = a0 + d·{0..|A|-1}`, `B = b0 + d·{0..|B|-1}`
/// and the lines `z2 = αz1 + b0 − α·a0 + d·β` for `α ∈ {1..|A|}`,
/// `β ∈ {0..|B|-1}`.
pub fn complex_lines_product_from(
    a0: &GaussianRational,
    b0: &GaussianRational,
    d: &GaussianRational,
    size_a: u32,
    size_b: u32,
) -> Result<Configuration> {
    require_positive("|A|", size_a)?;
    require_positive("|B|", size_b)?;
    if d.is_zero() {
        return Err(Error::InvalidInput("grid step must be nonzero".into()));
    }
    let step = |base: &GaussianRational, k: u32| base.clone() + &(d.clone() * &GaussianRational::from_ints(i64::from(k), 0));
    let set_a: Vec<GaussianRational> = (0..size_a).map(|u| step(a0, u)).collect();
    let set_b: Vec<GaussianRational> = (0..size_b).map(|v| step(b0, v)).collect();
    let mut points = Vec::with_capacity(set_a.len() * set_b.len());
    for x in &set_a {
        for y in &set_b {
            points.push([x.clone(), y.clone()]);
        }
    }
    let (z1, z2) = (CPoly::var(2, 0), CPoly::var(2, 1));
    let mut lines = Vec::new();
    for alpha in 1..=i64::from(size_a) {
        let alpha = GaussianRational::from_ints(alpha, 0);
        for beta in 0..size_b {
            let c = step(b0, beta) - &(alpha.clone() * a0);
            lines.push(&(&z2 - &z1.scale(&alpha)) - &CPoly::constant(2, c));
        }
    }
    Configuration::new(
        GroundField::C2,
        points,
        lines,
        metadata(
            "complex-product",
            json!({ "a": size_a, "b": size_b, "a0": a0, "b0": b0, "d": d }),
            0,
        ),
    )
}

fn small_gaussian(rng: &mut ChaCha8Rng, nonzero: bool) -> GaussianRational {
    loop {
        let den = rng.gen_range(1..=4);
        let w = z(frac(rng.gen_range(-6..=6), den), frac(rng.gen_range(-6..=6), den));
        if !nonzero || !w.is_zero() {
            return w;
        }
    }
}

/// Seeded Cartesian-product family of complex lines, certified
/// `k = 2`, `s = 1`.
pub fn gen_complex_lines_product(size_a: u32, size_b: u32, seed: u64) -> Result<Configuration> {
    for attempt in 0..REGENERATE_BUDGET {
        let mut rng = rng_for(seed, "complex-product", attempt);
        let a0 = small_gaussian(&mut rng, false);
        let b0 = small_gaussian(&mut rng, false);
        let d = small_gaussian(&mut rng, true);
        let mut config = complex_lines_product_from(&a0, &b0, &d, size_a, size_b)?;
        config.metadata.seed = seed;
        config.metadata.params.insert("attempt".into(), json!(attempt));
        if ensure_certified(&config, 2, 1)? {
            return Ok(config);
        }
    }
    Err(Error::BudgetExhausted(format!(
        "no certified complex-line arrangement after {REGENERATE_BUDGET} attempts"
    )))
}

/// Levi-flat hypersurface `Im(z2 − g(z1)) = 0` with some of its leaves
/// `z2 = g(z1) + c` and sample points on each.
#[derive(Clone, Debug)]
pub struct LeafFamily {
    pub hypersurface: Hypersurface,
    pub constants: Vec<Rational>,
    pub config: Configuration,
    /// Leaf index of every configuration point.
    pub leaf_of_point: Vec<usize>,
}

/// Builds `count` leaves with `samples` points each. `g` is a polynomial
/// in `z1` alone.
pub fn gen_leaf_family(g: &CPoly, count: u32, samples: u32, seed: u64) -> Result<LeafFamily> {
    require_positive("count", count)?;
    let g = match g.nvars() {
        1 => g.remap_vars(2, &[0]),
        2 if g.degree_in(1) == 0 => g.clone(),
        _ => {
            return Err(Error::InvalidInput(
                "g must be a polynomial in z1 alone".into(),
            ))
        }
    };
    let graph = &CPoly::var(2, 1) - &g;
    let p = realify_poly(&graph).v;
    let hypersurface = Hypersurface::new(p.clone())
        .map_err(|_| Error::InvalidInput("Im(z2 - g(z1)) vanishes identically".into()))?;
    let mut rng = rng_for(seed, "leaf", 0);
    let constants: Vec<Rational> = (0..i64::from(count))
        .map(|k| q(k) + &frac(rng.gen_range(0..97), 97))
        .collect();
    let mut points = Vec::new();
    let mut curves = Vec::new();
    let mut leaf_of_point = Vec::new();
    for (leaf, c) in constants.iter().enumerate() {
        let f = &graph - &CPoly::constant(2, GaussianRational::from(c.clone()));
        let curve = ComplexCurve::from_poly(f.clone())?;
        if !containment_check(&hypersurface, &curve)?.is_contained() {
            return Err(Error::InvalidInput(format!("leaf {leaf} is not contained in the hypersurface")));
        }
        let mut used = HashSet::new();
        while used.len() < samples as usize {
            let den = rng.gen_range(1..=8);
            let z1 = z(frac(rng.gen_range(-20..=20), den), frac(rng.gen_range(-20..=20), den));
            if !used.insert(z1.clone()) {
                continue;
            }
            let z2 = g.eval(&[z1.clone(), GaussianRational::zero()])? + &GaussianRational::from(c.clone());
            points.push([z1, z2]);
            leaf_of_point.push(leaf);
        }
        curves.push(f);
    }
    let g_text = g.display_with(&COMPLEX_VARS).to_string();
    let mut config = Configuration::new(
        GroundField::C2,
        points,
        curves,
        metadata(
            "leaf",
            json!({ "g": g_text, "count": count, "samples": samples }),
            seed,
        ),
    )?;
    config.hypersurface = Some(p);
    Ok(LeafFamily {
        hypersurface,
        constants,
        config,
        leaf_of_point,
    })
}

/// `m` seeded points with coordinates `k / 2^20`, `0 ≤ k < 2^20`, in
/// `dim` dimensions.
pub fn uniform_points(m: usize, dim: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = rng_for(seed, "uniform-points", 0);
    (0..m)
        .map(|_| {
            (0..dim)
                .map(|_| frac(rng.gen_range(0..RANDOM_DENOMINATOR), RANDOM_DENOMINATOR))
                .collect()
        })
        .collect()
}

fn random_curve<F: Field>(rng: &mut ChaCha8Rng, degree: u32, complex: bool) -> MultiPoly<F> {
    loop {
        let mut terms = Vec::new();
        for total in 0..=degree {
            for e1 in 0..=total {
                let re = rng.gen_range(-9..=9);
                let im = if complex { rng.gen_range(-9..=9) } else { 0 };
                let c = F::from_gaussian(GaussianRational::from_ints(re, im)).expect("in field");
                terms.push((Monomial::new(vec![e1, total - e1]), c));
            }
        }
        let f = terms
            .into_iter()
            .fold(MultiPoly::zero(2), |acc, (mono, c)| &acc + &MultiPoly::monomial(2, mono, c));
        if f.total_degree() >= 1 {
            return f;
        }
    }
}

/// Seeded uniform points in the unit box and dense random curves of the
/// given degree with small integer coefficients.
pub fn gen_random(m: u32, n: u32, degree: u32, ground_field: GroundField, seed: u64) -> Result<Configuration> {
    require_positive("degree", degree)?;
    let coords = uniform_points(m as usize, ground_field.real_dim(), seed);
    let points: Vec<[GaussianRational; 2]> = coords
        .into_iter()
        .map(|c| match ground_field {
            GroundField::R2 => [c[0].clone().into(), c[1].clone().into()],
            GroundField::C2 => [z(c[0].clone(), c[1].clone()), z(c[2].clone(), c[3].clone())],
        })
        .collect();
    let mut rng = rng_for(seed, "random-curves", 0);
    let curves = (0..n)
        .map(|_| match ground_field {
            GroundField::R2 => random_curve::<Rational>(&mut rng, degree, false).to_gaussian(),
            GroundField::C2 => random_curve::<GaussianRational>(&mut rng, degree, true),
        })
        .collect();
    Configuration::new(
        ground_field,
        points,
        curves,
        metadata(
            "random",
            json!({ "m": m, "n": n, "degree": degree, "ground_field": ground_field }),
            seed,
        ),
    )
}

/// Parses a plane curve in `x, y`.
pub fn parse_plane_curve(src: &str) -> Result<QPoly> {
    Ok(QPoly::parse(src, &PLANE_VARS)?)
}
