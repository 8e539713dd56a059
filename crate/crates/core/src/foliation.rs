//! The maximal J-invariant tangent distribution `E_p = T_pM ∩ J⁻¹(T_pM)` of
//! a real hypersurface `M = {P = 0} ⊂ ℝ⁴`, Lie brackets of polynomial
//! vector fields, the bracket (Levi) defect, and checks that embedded
//! complex curves inside `M` are tangent to `E`.
//!
//! Everything is exact: points are rational and all subspaces are compared
//! by exact rank computations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::matrix::{dot, same_span, vectors_rank, ExactMatrix};
use crate::algebra::{resultant, CPoly, Field, GaussianRational, QPoly, Rational};
use crate::cr::{iota, j_apply, realify_poly, tangent_contains_pi, ComplexCurve, PiContainment, RealPair};
use crate::error::{AlgebraError, Error, Result};

/// A real hypersurface `P(x1, y1, x2, y2) = 0`. Irreducibility of `P` is
/// the caller's declaration and is not checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypersurface {
    p: QPoly,
    degree_bound: u32,
}

impl Hypersurface {
    pub fn new(p: QPoly) -> Result<Self> {
        if p.nvars() != 4 {
            return Err(AlgebraError::DimensionMismatch {
                expected: 4,
                got: p.nvars(),
            }
            .into());
        }
        if p.is_zero() {
            return Err(AlgebraError::ZeroPolynomial.into());
        }
        let degree_bound = p.total_degree();
        Ok(Hypersurface { p, degree_bound })
    }

    pub fn unit_sphere() -> Self {
        Self::new(QPoly::parse("x1^2 + y1^2 + x2^2 + y2^2 - 1", &crate::algebra::REAL4_VARS).expect("valid"))
            .expect("nonzero")
    }

    pub fn poly(&self) -> &QPoly {
        &self.p
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn contains_point(&self, p: &[Rational]) -> Result<bool> {
        Ok(self.p.eval(p)?.is_zero())
    }
}

/// Exact data of the distribution at one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionFrame {
    pub base_point: Vec<Rational>,
    pub grad: Vec<Rational>,
    pub jgrad: Vec<Rational>,
    pub e_basis: [Vec<Rational>; 2],
}

impl DistributionFrame {
    pub fn contains(&self, w: &[Rational]) -> bool {
        dot(&self.grad, w).is_zero() && dot(&self.jgrad, w).is_zero()
    }
}

pub fn distribution_frame(z: &Hypersurface, p: &[Rational]) -> Result<DistributionFrame> {
    if !z.contains_point(p)? {
        return Err(Error::NotOnHypersurface);
    }
    match tangent_contains_pi(&z.p, p)? {
        PiContainment::None => {}
        other => return Err(Error::ExceptionalPoint(format!("{other:?}"))),
    }
    let grad = z.p.gradient(p)?;
    let jgrad = j_apply(&grad)?;
    let m = ExactMatrix::from_rows(&[grad.clone(), jgrad.clone()])?;
    let ker = m.kernel();
    let [a, b]: [Vec<Rational>; 2] = ker
        .try_into()
        .map_err(|k: Vec<_>| Error::InvalidInput(format!("kernel of dimension {}", k.len())))?;
    Ok(DistributionFrame {
        base_point: p.to_vec(),
        grad,
        jgrad,
        e_basis: [a, b],
    })
}

/// Per-point membership in the exceptional set: singular points of `Z` and
/// points whose tangent space contains Π₁ or Π₂.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointFlags {
    pub singular: bool,
    pub contains_pi1: bool,
    pub contains_pi2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalLocusReport {
    pub points: Vec<Vec<Rational>>,
    pub flags: Vec<PointFlags>,
}

pub fn exceptional_locus_report(z: &Hypersurface, points: &[Vec<Rational>]) -> Result<ExceptionalLocusReport> {
    let flags = points
        .iter()
        .map(|p| match tangent_contains_pi(&z.p, p) {
            Err(Error::SingularPoint) => Ok(PointFlags {
                singular: true,
                contains_pi1: false,
                contains_pi2: false,
            }),
            Err(e) => Err(e),
            Ok(c) => Ok(PointFlags {
                singular: false,
                contains_pi1: matches!(c, PiContainment::Pi1 | PiContainment::Both),
                contains_pi2: matches!(c, PiContainment::Pi2 | PiContainment::Both),
            }),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExceptionalLocusReport {
        points: points.to_vec(),
        flags,
    })
}

/// A polynomial vector field on ℝ⁴.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyVectorField {
    pub components: [QPoly; 4],
}

impl PolyVectorField {
    pub fn new(components: [QPoly; 4]) -> Result<Self> {
        if let Some(bad) = components.iter().find(|c| c.nvars() != 4) {
            return Err(AlgebraError::DimensionMismatch {
                expected: 4,
                got: bad.nvars(),
            }
            .into());
        }
        Ok(PolyVectorField { components })
    }

    /// The constant field `e_k`.
    pub fn basis(k: usize) -> Self {
        PolyVectorField {
            components: std::array::from_fn(|c| if c == k { QPoly::one(4) } else { QPoly::zero(4) }),
        }
    }

    pub fn eval(&self, p: &[Rational]) -> Result<Vec<Rational>, AlgebraError> {
        self.components.iter().map(|c| c.eval(p)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(QPoly::is_zero)
    }

    /// Directional derivative of `f` along the field.
    pub fn apply(&self, f: &QPoly) -> QPoly {
        self.components
            .iter()
            .enumerate()
            .fold(QPoly::zero(4), |acc, (l, c)| &acc + &(c * &f.partial(l)))
    }

    pub fn add(&self, other: &Self) -> Self {
        PolyVectorField {
            components: std::array::from_fn(|k| &self.components[k] + &other.components[k]),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolyVectorField {
            components: std::array::from_fn(|k| self.components[k].scale(c)),
        }
    }
}

/// `[X, Y]_k = Σ_l X_l ∂_l Y_k − Y_l ∂_l X_k`.
pub fn lie_bracket(x: &PolyVectorField, y: &PolyVectorField) -> PolyVectorField {
    PolyVectorField {
        components: std::array::from_fn(|k| &x.apply(&y.components[k]) - &y.apply(&x.components[k])),
    }
}

/// `X_i = |∇P|² e_i − ⟨e_i, ∇P⟩ ∇P − ⟨e_i, J∇P⟩ J∇P` and likewise `X_j`.
/// Both fields are orthogonal to `∇P` and `J∇P` everywhere.
pub fn tangent_frame_fields(z: &Hypersurface, i: usize, j: usize) -> Result<(PolyVectorField, PolyVectorField)> {
    if i == j || i >= 4 || j >= 4 {
        return Err(Error::InvalidInput(format!("frame indices ({i}, {j}) must be distinct and below 4")));
    }
    let grad = z.p.gradient_polys();
    let jgrad = j_apply(&grad)?;
    let norm2 = grad.iter().fold(QPoly::zero(4), |acc, g| &acc + &(g * g));
    let field = |k: usize| -> PolyVectorField {
        PolyVectorField {
            components: std::array::from_fn(|c| {
                let mut comp = &(&grad[k] * &grad[c]) + &(&jgrad[k] * &jgrad[c]);
                comp = -comp;
                if c == k {
                    comp = &comp + &norm2;
                }
                comp
            }),
        }
    };
    Ok((field(i), field(j)))
}

/// Raw and normalized defect `⟨[X_i, X_j](p), J∇P(p)⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketDefect {
    pub i: usize,
    pub j: usize,
    pub raw: Rational,
    /// `raw / |∇P(p)|⁶`.
    pub normalized: Rational,
}

impl BracketDefect {
    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }
}

/// Precomputed frame fields and their Jacobians for repeated pointwise
/// evaluation of the bracket defect.
pub struct DefectEvaluator {
    i: usize,
    j: usize,
    x: PolyVectorField,
    y: PolyVectorField,
    dx: Vec<Vec<QPoly>>,
    dy: Vec<Vec<QPoly>>,
    grad: Vec<QPoly>,
}

impl DefectEvaluator {
    pub fn new(z: &Hypersurface, i: usize, j: usize) -> Result<Self> {
        let (x, y) = tangent_frame_fields(z, i, j)?;
        let jac = |f: &PolyVectorField| -> Vec<Vec<QPoly>> {
            f.components.iter().map(|c| (0..4).map(|l| c.partial(l)).collect()).collect()
        };
        Ok(DefectEvaluator {
            i,
            j,
            dx: jac(&x),
            dy: jac(&y),
            x,
            y,
            grad: z.p.gradient_polys(),
        })
    }

    /// Frame vectors `X_i(p)`, `X_j(p)`.
    pub fn frame_at(&self, p: &[Rational]) -> Result<(Vec<Rational>, Vec<Rational>)> {
        Ok((self.x.eval(p)?, self.y.eval(p)?))
    }

    pub fn bracket_at(&self, p: &[Rational]) -> Result<Vec<Rational>> {
        let xv = self.x.eval(p)?;
        let yv = self.y.eval(p)?;
        let mut out = Vec::with_capacity(4);
        for k in 0..4 {
            let mut acc = Rational::zero();
            for l in 0..4 {
                acc += &(xv[l].clone() * self.dy[k][l].eval(p)?);
                acc -= &(yv[l].clone() * self.dx[k][l].eval(p)?);
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn eval(&self, p: &[Rational]) -> Result<BracketDefect> {
        let (xv, yv) = self.frame_at(p)?;
        if vectors_rank(&[xv, yv]) < 2 {
            return Err(Error::FrameDegenerate { i: self.i, j: self.j });
        }
        let grad: Vec<Rational> = self.grad.iter().map(|g| g.eval(p)).collect::<Result<_, _>>()?;
        let jgrad = j_apply(&grad)?;
        let raw = dot(&self.bracket_at(p)?, &jgrad);
        let norm2 = dot(&grad, &grad);
        let norm6 = norm2.clone() * &norm2 * &norm2;
        let normalized = raw.div_exact(&norm6).map_err(|_| Error::SingularPoint)?;
        Ok(BracketDefect {
            i: self.i,
            j: self.j,
            raw,
            normalized,
        })
    }
}

/// Bracket defect at a point of `Z` passing the frame preconditions.
pub fn bracket_defect(z: &Hypersurface, p: &[Rational], i: usize, j: usize) -> Result<BracketDefect> {
    distribution_frame(z, p)?;
    DefectEvaluator::new(z, i, j)?.eval(p)
}

/// The defect as a polynomial on all of ℝ⁴: `⟨[X_i, X_j], J∇P⟩`.
pub fn defect_polynomial(z: &Hypersurface, i: usize, j: usize) -> Result<QPoly> {
    let (x, y) = tangent_frame_fields(z, i, j)?;
    let bracket = lie_bracket(&x, &y);
    let jgrad = j_apply(&z.p.gradient_polys())?;
    Ok(bracket
        .components
        .iter()
        .zip(&jgrad)
        .fold(QPoly::zero(4), |acc, (b, g)| &acc + &(b * g)))
}

/// Frame pair maximizing `|X_i(p) ∧ X_j(p)|²`, ties broken by
/// lexicographic `(i, j)`.
pub fn choose_frame_indices(z: &Hypersurface, p: &[Rational]) -> Result<(usize, usize)> {
    let grad = z.p.gradient(p)?;
    let jgrad = j_apply(&grad)?;
    let norm2 = dot(&grad, &grad);
    let frame = |k: usize| -> Vec<Rational> {
        (0..4)
            .map(|c| {
                let mut v = -(grad[k].clone() * &grad[c] + jgrad[k].clone() * &jgrad[c]);
                if c == k {
                    v += &norm2;
                }
                v
            })
            .collect()
    };
    let vecs: Vec<Vec<Rational>> = (0..4).map(frame).collect();
    let mut best: Option<((usize, usize), Rational)> = None;
    for i in 0..4 {
        for j in i + 1..4 {
            let (a, b) = (&vecs[i], &vecs[j]);
            let ab = dot(a, b);
            let wedge = dot(a, a) * dot(b, b) - ab.clone() * &ab;
            if best.as_ref().is_none_or(|(_, w)| wedge > *w) {
                best = Some(((i, j), wedge));
            }
        }
    }
    let ((i, j), w) = best.expect("six pairs");
    if w.is_zero() {
        return Err(Error::FrameDegenerate { i, j });
    }
    Ok((i, j))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TangencyStatus {
    Pass,
    Fail,
    Skipped(String),
}

/// One sample of a leaf tangency run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangencyRecord {
    pub point: Vec<Rational>,
    pub status: TangencyStatus,
    /// Bracket defect at the point for the report's frame pair, when the
    /// frame is nondegenerate there.
    pub defect: Option<Rational>,
    /// Whether `T_p ι(γ) = E_p`; absent when the point was skipped.
    pub tangency: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangencyReport {
    pub frame: Option<(usize, usize)>,
    pub records: Vec<TangencyRecord>,
}

impl TangencyReport {
    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.status == TangencyStatus::Pass).count()
    }

    pub fn failed(&self) -> usize {
        self.records.iter().filter(|r| r.status == TangencyStatus::Fail).count()
    }

    pub fn skipped(&self) -> usize {
        self.records.len() - self.passed() - self.failed()
    }

    pub fn all_pass(&self) -> bool {
        !self.records.is_empty() && self.passed() == self.records.len()
    }

    /// CSV projection with header `point,status,defect,tangency`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("point,status,defect,tangency\n");
        for r in &self.records {
            let pt: Vec<String> = r.point.iter().map(ToString::to_string).collect();
            let status = match &r.status {
                TangencyStatus::Pass => "pass".to_string(),
                TangencyStatus::Fail => "fail".to_string(),
                TangencyStatus::Skipped(why) => format!("skipped: {why}"),
            };
            out.push_str(&format!(
                "\"{}\",\"{}\",{},{}\n",
                pt.join(" "),
                status,
                r.defect.as_ref().map(ToString::to_string).unwrap_or_default(),
                r.tangency.map(|t| t.to_string()).unwrap_or_default()
            ));
        }
        out
    }
}

/// Tangent plane of ι(γ) at a regular point: kernel of `[∇u; ∇v]`.
pub fn curve_tangent_plane(pair: &RealPair, p: &[Rational]) -> Result<Option<Vec<Vec<Rational>>>> {
    let gu = pair.u.gradient(p)?;
    let gv = pair.v.gradient(p)?;
    let m = ExactMatrix::from_rows(&[gu, gv])?;
    if m.rank() < 2 {
        return Ok(None);
    }
    Ok(Some(m.kernel()))
}

fn tangency_at(
    z: &Hypersurface,
    pair: &RealPair,
    defect: Option<&DefectEvaluator>,
    p: &[Rational],
) -> Result<TangencyRecord> {
    let skip = |why: &str| TangencyRecord {
        point: p.to_vec(),
        status: TangencyStatus::Skipped(why.to_string()),
        defect: None,
        tangency: None,
    };
    if !pair.u.eval(p)?.is_zero() || !pair.v.eval(p)?.is_zero() {
        return Ok(skip("point not on curve"));
    }
    let Some(tangent) = curve_tangent_plane(pair, p)? else {
        return Ok(skip("singular point of curve"));
    };
    let frame = match distribution_frame(z, p) {
        Ok(f) => f,
        Err(Error::NotOnHypersurface) => return Ok(skip("point not on hypersurface")),
        Err(Error::SingularPoint) => return Ok(skip("singular point of hypersurface")),
        Err(Error::ExceptionalPoint(which)) => return Ok(skip(&format!("tangent space contains {which}"))),
        Err(e) => return Err(e),
    };
    let equal = same_span(&tangent, &frame.e_basis);
    let defect = match defect.map(|d| d.eval(p)) {
        Some(Ok(d)) => Some(d.raw),
        Some(Err(Error::FrameDegenerate { .. })) | None => None,
        Some(Err(e)) => return Err(e),
    };
    Ok(TangencyRecord {
        point: p.to_vec(),
        status: if equal { TangencyStatus::Pass } else { TangencyStatus::Fail },
        defect,
        tangency: Some(equal),
    })
}

/// For each sample point, verifies exactly that the tangent plane of ι(γ)
/// equals `E_p`. Points violating a precondition are reported as skipped.
pub fn leaf_tangency_check(z: &Hypersurface, curve: &ComplexCurve, samples: &[Vec<Rational>]) -> Result<TangencyReport> {
    let pair = realify_poly(curve.poly());
    let frame = samples.iter().find_map(|p| {
        distribution_frame(z, p).ok()?;
        choose_frame_indices(z, p).ok()
    });
    let evaluator = frame.map(|(i, j)| DefectEvaluator::new(z, i, j)).transpose()?;
    let records = samples
        .par_iter()
        .map(|p| tangency_at(z, &pair, evaluator.as_ref(), p))
        .collect::<Result<Vec<_>>>()?;
    Ok(TangencyReport { frame, records })
}

/// Result of deciding whether ι(γ) lies in `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Containment {
    Contained,
    /// `residual` is `P` pulled back along the curve's parametrization
    /// (cleared of denominators); it is a nonzero polynomial.
    NotContained { residual: QPoly },
    /// No exact route applies; `samples_checked` points of ι(γ) were found
    /// on `Z`.
    Unknown { samples_checked: usize, reason: String },
}

impl Containment {
    pub fn is_contained(&self) -> bool {
        matches!(self, Containment::Contained)
    }
}

/// A curve `a(z_free) z_solved + b(z_free) = 0` of degree one in
/// `z_solved` with `a`, `b` coprime, parametrized by `z_solved = −b/a`.
#[derive(Clone, Debug)]
pub(crate) struct GraphForm {
    pub a: CPoly,
    pub b: CPoly,
    pub solved: usize,
    pub free: usize,
}

impl GraphForm {
    pub fn of(f: &CPoly) -> Option<Self> {
        [(1usize, 0usize), (0, 1)].into_iter().find_map(|(solved, free)| {
            if f.degree_in(solved) != 1 {
                return None;
            }
            let mut coeffs = f.coefficients_in(solved);
            let a = coeffs.pop().expect("degree one");
            let b = coeffs.pop().expect("degree one");
            // A common factor of a and b would add vertical components that
            // the parametrization misses.
            if a.degree_in(free) > 0 && (b.is_zero() || resultant(&a, &b, free).ok()?.is_zero()) {
                return None;
            }
            Some(GraphForm { a, b, solved, free })
        })
    }

    /// The curve point over `z_free = w`, or `None` at a pole.
    pub fn point_at(&self, w: &GaussianRational) -> Result<Option<[GaussianRational; 2]>> {
        let mut arg = [GaussianRational::zero(), GaussianRational::zero()];
        arg[self.free] = w.clone();
        let a = self.a.eval(&arg)?;
        let Some(a_inv) = a.inv() else {
            return Ok(None);
        };
        arg[self.solved] = -(self.b.eval(&arg)? * &a_inv);
        Ok(Some(arg))
    }

    /// `N^{deg P} · P` at `z_free = x + i y`, `z_solved = −b·ā / N` with
    /// `N = |a|²`, expressed in the real coordinates of `z_free`.
    pub fn pull_back(&self, p: &QPoly) -> QPoly {
        let ra = realify_poly(&self.a);
        let rb = realify_poly(&self.b);
        // −b·ā = −(ub + i vb)(ua − i va)
        let re_num = -(&(&rb.u * &ra.u) + &(&rb.v * &ra.v));
        let im_num = &(&rb.u * &ra.v) - &(&rb.v * &ra.u);
        let denom = &(&ra.u * &ra.u) + &(&ra.v * &ra.v);
        let deg = p.total_degree();
        let denom_pows: Vec<QPoly> = (0..=deg)
            .scan(QPoly::one(4), |acc, _| {
                let cur = acc.clone();
                *acc = &*acc * &denom;
                Some(cur)
            })
            .collect();
        let (free, solved) = (self.free, self.solved);
        let fx = QPoly::var(4, 2 * free);
        let fy = QPoly::var(4, 2 * free + 1);
        let mut acc = QPoly::zero(4);
        for (m, c) in p.terms() {
            let e = m.exps();
            let weight = e[2 * solved] + e[2 * solved + 1];
            let mut t = QPoly::constant(4, c.clone());
            t = &t * &fx.pow(e[2 * free]);
            t = &t * &fy.pow(e[2 * free + 1]);
            t = &t * &re_num.pow(e[2 * solved]);
            t = &t * &im_num.pow(e[2 * solved + 1]);
            t = &t * &denom_pows[(deg - weight) as usize];
            acc = &acc + &t;
        }
        acc
    }
}

/// Decides `ι(γ) ⊂ Z` for curves of degree one in some variable, i.e.
/// `a(z_k) z_l + b(z_k) = 0`, by pulling `P` back along the rational
/// parametrization `z_l = −b/a` and clearing the denominator `|a|^{2 deg P}`.
pub fn containment_check(z: &Hypersurface, curve: &ComplexCurve) -> Result<Containment> {
    let Some(graph) = GraphForm::of(curve.poly()) else {
        return Ok(Containment::Unknown {
            samples_checked: 0,
            reason: "curve has degree at least two in both variables".into(),
        });
    };
    let residual = graph.pull_back(&z.p);
    Ok(if residual.is_zero() {
        Containment::Contained
    } else {
        Containment::NotContained { residual }
    })
}

/// Evaluates ι(γ) ⊂ Z at explicit complex points of γ; used as sampled
/// evidence when the exact route does not apply.
pub fn sampled_containment(z: &Hypersurface, curve: &ComplexCurve, points: &[[GaussianRational; 2]]) -> Result<Containment> {
    let mut checked = 0;
    for pt in points {
        if !curve.poly().eval(pt)?.is_zero() {
            return Err(Error::InvalidInput("sample point is not on the curve".into()));
        }
        let x = iota(pt);
        let val = z.p.eval(&x)?;
        if !val.is_zero() {
            return Ok(Containment::NotContained {
                residual: QPoly::constant(4, val),
            });
        }
        checked += 1;
    }
    Ok(Containment::Unknown {
        samples_checked: checked,
        reason: "sampled evidence only".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{COMPLEX_VARS, REAL4_VARS};

    fn r(s: &str) -> QPoly {
        QPoly::parse(s, &REAL4_VARS).unwrap()
    }

    fn pt(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn curve(s: &str) -> ComplexCurve {
        ComplexCurve::from_poly(CPoly::parse(s, &COMPLEX_VARS).unwrap()).unwrap()
    }

    #[test]
    fn frame_of_graph_plane() {
        let z = Hypersurface::new(r("y2 - y1")).unwrap();
        let f = distribution_frame(&z, &pt(&["0", "0", "0", "0"])).unwrap();
        assert_eq!(f.grad, pt(&["0", "-1", "0", "1"]));
        assert_eq!(f.jgrad, pt(&["1", "0", "-1", "0"]));
        // Tangent directions of the leaves z2 = z1 + c.
        assert!(same_span(
            &f.e_basis,
            &[pt(&["1", "0", "1", "0"]), pt(&["0", "1", "0", "1"])]
        ));
    }

    #[test]
    fn frame_of_sphere() {
        let z = Hypersurface::unit_sphere();
        let f = distribution_frame(&z, &pt(&["1", "0", "0", "0"])).unwrap();
        assert_eq!(f.grad, pt(&["2", "0", "0", "0"]));
        assert_eq!(f.jgrad, pt(&["0", "2", "0", "0"]));
        assert!(same_span(&f.e_basis, &[pt(&["0", "0", "1", "0"]), pt(&["0", "0", "0", "1"])]));
    }

    #[test]
    fn frame_errors() {
        let z = Hypersurface::unit_sphere();
        assert!(matches!(
            distribution_frame(&z, &pt(&["0", "0", "0", "0"])),
            Err(Error::NotOnHypersurface)
        ));
        let cone = Hypersurface::new(r("x1^2 - y1^2")).unwrap();
        assert!(matches!(
            distribution_frame(&cone, &pt(&["0", "0", "1", "1"])),
            Err(Error::SingularPoint)
        ));
    }

    #[test]
    fn bracket_of_constant_fields_vanishes() {
        assert!(lie_bracket(&PolyVectorField::basis(0), &PolyVectorField::basis(1)).is_zero());
    }

    #[test]
    fn bracket_of_euler_field() {
        let x = PolyVectorField::new([r("x1"), r("0"), r("0"), r("0")]).unwrap();
        let b = lie_bracket(&x, &PolyVectorField::basis(0));
        assert_eq!(b.components[0], r("-1"));
        assert!(b.components[1..].iter().all(QPoly::is_zero));
    }

    #[test]
    fn frame_field_of_graph_plane() {
        let z = Hypersurface::new(r("y2 - y1")).unwrap();
        let (x1, _) = tangent_frame_fields(&z, 0, 1).unwrap();
        assert_eq!(x1.components, [r("1"), r("0"), r("1"), r("0")]);
        assert!(tangent_frame_fields(&z, 2, 2).is_err());
    }

    #[test]
    fn plane_defect_is_zero() {
        let z = Hypersurface::new(r("y2 - y1")).unwrap();
        let d = bracket_defect(&z, &pt(&["3", "1/2", "-7", "1/2"]), 0, 1).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn sphere_defect_is_nonzero() {
        let z = Hypersurface::unit_sphere();
        let p = pt(&["3/5", "4/5", "0", "0"]);
        let (i, j) = choose_frame_indices(&z, &p).unwrap();
        let d = bracket_defect(&z, &p, i, j).unwrap();
        assert!(!d.is_zero());
    }

    #[test]
    fn defect_polynomial_of_levi_flat_graph_is_zero() {
        let z = Hypersurface::new(r("y2 - 2*x1*y1")).unwrap();
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(defect_polynomial(&z, i, j).unwrap().is_zero());
            }
        }
        let sphere = defect_polynomial(&Hypersurface::unit_sphere(), 2, 3).unwrap();
        assert!(!sphere.is_zero());
    }

    #[test]
    fn containment_examples() {
        let plane = Hypersurface::new(r("y2 - y1")).unwrap();
        assert!(containment_check(&plane, &curve("z2 - z1 - 5")).unwrap().is_contained());
        match containment_check(&plane, &curve("z2 - z1 - i")).unwrap() {
            Containment::NotContained { residual } => assert_eq!(residual, r("1")),
            other => panic!("unexpected {other:?}"),
        }
        let sphere = Hypersurface::unit_sphere();
        match containment_check(&sphere, &curve("z2 - 2*z1 + 1")).unwrap() {
            Containment::NotContained { residual } => assert!(!residual.is_constant()),
            other => panic!("unexpected {other:?}"),
        }
        let conic = curve("z1^2 + z2^2 - 1");
        assert!(matches!(
            containment_check(&plane, &conic).unwrap(),
            Containment::Unknown { .. }
        ));
    }

    #[test]
    fn containment_with_nonconstant_leading_coefficient() {
        // z1·z2 = 1 lies in Im(z1 z2) = 0, i.e. x1 y2 + y1 x2 = 0.
        let z = Hypersurface::new(r("x1*y2 + y1*x2")).unwrap();
        assert!(containment_check(&z, &curve("z1*z2 - 1")).unwrap().is_contained());
        assert!(!containment_check(&z, &curve("z1*z2 - i")).unwrap().is_contained());
    }

    #[test]
    fn reducible_graph_is_not_parametrized() {
        // z1·z2 = 0 has the component z1 = 0, missed by z2 = 0/z1.
        let z = Hypersurface::new(r("y2")).unwrap();
        assert!(matches!(
            containment_check(&z, &curve("z1*z2")).unwrap(),
            Containment::Unknown { .. }
        ));
        assert!(matches!(
            containment_check(&z, &curve("(z1 - 1)*z2 + z1^2 - 1")).unwrap(),
            Containment::Unknown { .. }
        ));
    }

    #[test]
    fn tangency_on_plane_leaves() {
        let z = Hypersurface::new(r("y2 - y1")).unwrap();
        let leaf = curve("z2 - z1 - 3");
        let samples = vec![pt(&["0", "0", "3", "0"]), pt(&["1/2", "-2", "7/2", "-2"]), pt(&["1", "1", "1", "1"])];
        let report = leaf_tangency_check(&z, &leaf, &samples).unwrap();
        assert_eq!(report.passed(), 2);
        assert_eq!(report.skipped(), 1);
        assert_eq!(
            report.records[2].status,
            TangencyStatus::Skipped("point not on curve".into())
        );
    }
}
