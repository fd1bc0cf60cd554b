//! Boundary conditions carried by a reflecting-transmitting defect.
//!
//! A pair of matrix differential operators (U, V) links the one-sided
//! limits of the field at the origin. On the free solutions each
//! exponential component is an eigenfunction of the operators, so all
//! checks reduce to pointwise matrix identities in the momentum.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::defect_rep::{build_classified, build_nls_defect, ClassifiedParams, DefectRep, NLSDefectParams};
use crate::spectral::{max_abs, ExtendedReal, Poly, SpectralMatrix, SpectralScalar};
use crate::{Error, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCase {
    /// Reflection and transmission proportional to the identity.
    Scalar,
    /// Proportional to a sign-diagonal direction matrix.
    Direction,
    /// The one-parameter interpolation between the two.
    GeneralA,
}

/// The operator pair of the boundary relation
/// `D_U (limit from above) = D_V (limit from below)`, with
/// `U = diag(u1 I, u2 I)` and each `V` block split over the identity and a
/// constant Hermitian direction matrix `W`.
#[derive(Clone)]
pub struct BoundaryOperatorPair {
    pub n: usize,
    pub u1: SpectralScalar,
    pub u2: SpectralScalar,
    /// `v[r][s] = (iso, dir)` meaning the block is `iso I + dir W`.
    pub v: [[(SpectralScalar, SpectralScalar); 2]; 2],
    pub w: DMatrix<Complex64>,
}

impl BoundaryOperatorPair {
    pub fn v_block(&self, r: usize, s: usize) -> SpectralMatrix {
        let (iso, dir) = &self.v[r][s];
        let mut m = SpectralMatrix::scalar(self.n, iso.clone());
        if !dir.is_zero() {
            m = m
                .add(&SpectralMatrix::from_const(&self.w).scale(dir))
                .expect("blocks share the dimension");
        }
        m
    }

    /// The (X, Y) pair of one scalar copy of the functional equations:
    /// copy 0 couples to the field limit, copy 1 to its derivative.
    pub fn functional_pair(&self, copy: usize) -> FunctionalPair {
        let ik = SpectralScalar::from_poly(Poly::new(vec![c(0.0, 0.0), c(0.0, 1.0)]));
        let x = match copy {
            0 => self.u1.clone(),
            _ => ik.mul(&self.u2),
        };
        let y = self
            .v_block(copy, 0)
            .add(&self.v_block(copy, 1).scale(&ik))
            .expect("blocks share the dimension");
        FunctionalPair { n: self.n, x, y }
    }
}

/// One copy of the functional equations: `X` a scalar multiple of the
/// identity, `Y` a matrix.
#[derive(Clone)]
pub struct FunctionalPair {
    pub n: usize,
    pub x: SpectralScalar,
    pub y: SpectralMatrix,
}

/// Largest residual of
/// `X(k) + X(-k) R+(-k) - Y(k) T-(k)` and
/// `Y(k) + Y(-k) R-(-k) - X(k) T+(k)` over the samples.
pub fn check_functional_equations(fp: &FunctionalPair, rep: &DefectRep, ks: &[f64]) -> Result<f64> {
    if fp.n != rep.n {
        return Err(Error::DimensionMismatch(format!(
            "pair dimension {} vs representation {}",
            fp.n, rep.n
        )));
    }
    let id = DMatrix::<Complex64>::identity(rep.n, rep.n);
    let mut worst: f64 = 0.0;
    for &k in ks {
        let (kp, km) = (c(k, 0.0), c(-k, 0.0));
        let x = fp.x.eval(kp)?;
        let xm = fp.x.eval(km)?;
        let y = fp.y.eval(kp)?;
        let ym = fp.y.eval(km)?;
        // Residuals are scale-normalized: the entries of X, Y grow with the
        // parameter magnitudes while the identity itself is exact.
        let scale = 1.0 + x.norm().max(xm.norm()).max(max_abs(&y)).max(max_abs(&ym));
        let eq1 = &id * x + rep.r_plus.eval(km)? * xm - &y * rep.t_minus.eval(kp)?;
        let eq2 = &y + ym * rep.r_minus.eval(km)? - rep.t_plus.eval(kp)? * x;
        worst = worst.max(max_abs(&eq1) / scale).max(max_abs(&eq2) / scale);
    }
    Ok(worst)
}

/// Closed-form operator pair for one case of the classified family.
/// Validates the parameters (including parity) by rebuilding the
/// representation first.
pub fn build_case_solution(case: BoundaryCase, p: &ClassifiedParams) -> Result<BoundaryOperatorPair> {
    build_classified(p)?;
    if p.eps_plus != 1.0 {
        return Err(Error::CaseMismatch("closed forms assume eps+ = +1".into()));
    }
    match case {
        BoundaryCase::Scalar => {
            if p.e_diag.iter().any(|&e| e < 0.0) {
                return Err(Error::CaseMismatch(
                    "scalar case requires a trivial direction matrix".into(),
                ));
            }
        }
        BoundaryCase::Direction => {
            if p.a != ExtendedReal::Infinity {
                return Err(Error::CaseMismatch(
                    "direction case requires the infinite interpolation parameter".into(),
                ));
            }
        }
        BoundaryCase::GeneralA => match p.a {
            ExtendedReal::Finite(a) if a != 0.0 => {}
            _ => {
                return Err(Error::CaseMismatch(
                    "general case requires a finite nonzero interpolation parameter".into(),
                ));
            }
        },
    }
    let n = p.n;
    let i1 = SpectralScalar::constant(c(0.0, 1.0));
    let f = p
        .big_a
        .add(&i1)
        .mul(&p.big_b.add(&i1))
        .mul(&p.big_c.add(&i1));
    let g = p
        .big_a
        .add(&i1)
        .mul(&p.big_b.sub(&i1))
        .mul(&p.big_c.sub(&i1));
    let w2 = p.omega.mul(&p.omega);
    let wp = w2.add(&SpectralScalar::one());
    let em = w2.sub(&SpectralScalar::one()).scale(c(p.eps_minus, 0.0));
    let zero = || SpectralScalar::zero();
    let w_mat = {
        let e = DMatrix::from_fn(n, n, |i, j| if i == j { c(p.e_diag[i], 0.0) } else { c(0.0, 0.0) });
        &p.m * e * p.m.adjoint()
    };

    let (u, v) = match case {
        BoundaryCase::Scalar => {
            let u = f.mul(&p.omega).scale(c(2.0, 0.0));
            let v11 = g.mul(&wp.add(&em));
            let v22 = g.mul(&wp.sub(&em));
            (u, [[(v11, zero()), (zero(), zero())], [(zero(), zero()), (v22, zero())]])
        }
        BoundaryCase::Direction => {
            let u = f.mul(&p.omega).scale(c(2.0, 0.0));
            let v11 = (g.mul(&em), g.mul(&wp));
            let v22 = (g.mul(&em).neg(), g.mul(&wp));
            (u, [[v11, (zero(), zero())], [(zero(), zero()), v22]])
        }
        BoundaryCase::GeneralA => {
            let a = p.a.finite().expect("checked above");
            let one_p = SpectralScalar::from_poly(Poly::new(vec![c(1.0, 0.0), c(0.0, a)]));
            let one_m = SpectralScalar::from_poly(Poly::new(vec![c(1.0, 0.0), c(0.0, -a)]));
            let iak = SpectralScalar::from_poly(Poly::new(vec![c(0.0, 0.0), c(0.0, a)]));
            let ik = SpectralScalar::from_poly(Poly::new(vec![c(0.0, 0.0), c(0.0, 1.0)]));
            let u = one_p.mul(&f).mul(&p.omega).scale(c(2.0, 0.0));
            let v11 = (g.mul(&wp.add(&em.mul(&one_m))), g.mul(&wp).mul(&iak));
            let v21 = (g.mul(&ik).mul(&wp.sub(&em)), zero());
            let v22 = (g.mul(&iak).mul(&em), g.mul(&iak).mul(&wp));
            (u, [[v11, (zero(), zero())], [v21, v22]])
        }
    };
    Ok(BoundaryOperatorPair { n, u1: u.clone(), u2: u, v, w: w_mat })
}

/// Operator pair of the canonical-field jump relation: `U = I` and
/// `V = alpha (a I, b I; c I, d I)`.
pub fn jump_boundary_pair(p: &NLSDefectParams, n: usize) -> Result<BoundaryOperatorPair> {
    p.validate()?;
    let z = || SpectralScalar::zero();
    let v = [
        [(SpectralScalar::constant(p.alpha * p.a), z()), (SpectralScalar::constant(p.alpha * p.b), z())],
        [(SpectralScalar::constant(p.alpha * p.c), z()), (SpectralScalar::constant(p.alpha * p.d), z())],
    ];
    Ok(BoundaryOperatorPair {
        n,
        u1: SpectralScalar::one(),
        u2: SpectralScalar::one(),
        v,
        w: DMatrix::identity(n, n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Side {
    Below,
    Above,
}

/// A free (g = 0) scattering solution: a superposition of plane waves on
/// each side of the defect, stored as (wavenumber, coefficient) pairs. The
/// columns are the solutions for the N incoming channels.
#[derive(Clone)]
pub struct FreeSolution {
    pub k: f64,
    pub from_left: bool,
    left: Vec<(f64, DMatrix<Complex64>)>,
    right: Vec<(f64, DMatrix<Complex64>)>,
}

impl FreeSolution {
    /// Incoming wave of momentum `k`. `from_left` selects the solution
    /// entering from below the defect (requires k > 0); otherwise the wave
    /// enters from above (requires k < 0).
    pub fn new(rep: &DefectRep, k: f64, from_left: bool) -> Result<Self> {
        if from_left && k <= 0.0 {
            return Err(Error::Parameter("left-incoming solution needs k > 0".into()));
        }
        if !from_left && k >= 0.0 {
            return Err(Error::Parameter("right-incoming solution needs k < 0".into()));
        }
        let id = DMatrix::<Complex64>::identity(rep.n, rep.n);
        let (kp, km) = (c(k, 0.0), c(-k, 0.0));
        let (left, right) = if from_left {
            (
                vec![(k, id), (-k, rep.r_minus.eval(km)?)],
                vec![(k, rep.t_plus.eval(kp)?)],
            )
        } else {
            (
                vec![(k, rep.t_minus.eval(kp)?)],
                vec![(k, id), (-k, rep.r_plus.eval(km)?)],
            )
        };
        Ok(FreeSolution { k, from_left, left, right })
    }

    fn components(&self, side: Side) -> &[(f64, DMatrix<Complex64>)] {
        match side {
            Side::Below => &self.left,
            Side::Above => &self.right,
        }
    }

    /// Pointwise value away from the defect.
    pub fn eval(&self, x: f64) -> DMatrix<Complex64> {
        let side = if x < 0.0 { Side::Below } else { Side::Above };
        let n = self.left[0].1.nrows();
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        for (q, m) in self.components(side) {
            out += m * (c(0.0, q * x)).exp();
        }
        out
    }

    /// One-sided limits of the value and the spatial derivative at zero,
    /// taken analytically from the closed form.
    pub fn limits(&self, side: Side) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        let n = self.left[0].1.nrows();
        let mut val = DMatrix::<Complex64>::zeros(n, n);
        let mut der = DMatrix::<Complex64>::zeros(n, n);
        for (q, m) in self.components(side) {
            val += m;
            der += m * c(0.0, *q);
        }
        (val, der)
    }
}

/// Residual of the boundary relation on the free solutions: each plane
/// wave is an eigenfunction, so the operators act by evaluation at its
/// wavenumber.
pub fn verify_on_free_solutions(
    bp: &BoundaryOperatorPair,
    rep: &DefectRep,
    ks: &[f64],
) -> Result<f64> {
    if bp.n != rep.n {
        return Err(Error::DimensionMismatch(format!(
            "operator dimension {} vs representation {}",
            bp.n, rep.n
        )));
    }
    let n = rep.n;
    let mut worst: f64 = 0.0;
    for &k in ks {
        let mag = k.abs();
        for sol in [FreeSolution::new(rep, mag, true)?, FreeSolution::new(rep, -mag, false)?] {
            let mut lhs = [DMatrix::<Complex64>::zeros(n, n), DMatrix::zeros(n, n)];
            for (q, m) in sol.components(Side::Above) {
                let qq = c(*q, 0.0);
                lhs[0] += m * bp.u1.eval(qq)?;
                lhs[1] += m * (bp.u2.eval(qq)? * c(0.0, *q));
            }
            let mut rhs = [DMatrix::<Complex64>::zeros(n, n), DMatrix::zeros(n, n)];
            for (q, m) in sol.components(Side::Below) {
                let qq = c(*q, 0.0);
                for row in 0..2 {
                    rhs[row] += bp.v_block(row, 0).eval(qq)? * m
                        + bp.v_block(row, 1).eval(qq)? * m * c(0.0, *q);
                }
            }
            let scale = 1.0
                + max_abs(&lhs[0]).max(max_abs(&lhs[1])).max(max_abs(&rhs[0])).max(max_abs(&rhs[1]));
            worst = worst.max(max_abs(&(&lhs[0] - &rhs[0])) / scale);
            worst = worst.max(max_abs(&(&lhs[1] - &rhs[1])) / scale);
        }
    }
    Ok(worst)
}

/// Residual of the canonical jump relation on the free solutions of the
/// defect family.
pub fn check_jump_relation(p: &NLSDefectParams, n: usize, ks: &[f64]) -> Result<f64> {
    let rep = build_nls_defect(p, n)?;
    let bp = jump_boundary_pair(p, n)?;
    verify_on_free_solutions(&bp, &rep, ks)
}

/// Substitute the derivative symbol for the momentum: each monomial `k^m`
/// becomes `(-i Dx)^m`.
pub fn dx_map(p: &Poly<Complex64>) -> Poly<Complex64> {
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(m, cm)| cm * c(0.0, -1.0).powu(m as u32))
        .collect();
    Poly::new(coeffs)
}

/// One rendered relation: a scalar operator polynomial on the above-limit
/// side and a pair of polynomials (identity part, direction part) on the
/// below-limit side. Derivative shifts are folded into the polynomials.
#[derive(Clone)]
pub struct CopyForm {
    pub lhs: Poly<Complex64>,
    pub rhs_iso: Poly<Complex64>,
    pub rhs_dir: Poly<Complex64>,
}

/// Differential rendering of an operator pair, defined when every entry is
/// polynomial in the momentum.
#[derive(Clone)]
pub struct DifferentialBoundaryForm {
    pub split: bool,
    pub copies: [CopyForm; 2],
}

/// Render an operator pair as differential boundary conditions. Each copy
/// is normalized by the lowest-order coefficient of its above-limit side.
pub fn render_differential_form(bp: &BoundaryOperatorPair) -> Result<DifferentialBoundaryForm> {
    let dx = Poly::<Complex64>::var();
    let mut copies = Vec::with_capacity(2);
    let mut split = false;
    for copy in 0..2 {
        let u = if copy == 0 { &bp.u1 } else { &bp.u2 };
        let mut lhs = dx_map(&u.as_poly()?);
        for _ in 0..copy {
            lhs = lhs.mul(&dx);
        }
        let iso0 = dx_map(&bp.v[copy][0].0.as_poly()?);
        let iso1 = dx_map(&bp.v[copy][1].0.as_poly()?);
        let dir0 = dx_map(&bp.v[copy][0].1.as_poly()?);
        let dir1 = dx_map(&bp.v[copy][1].1.as_poly()?);
        let mut rhs_iso = iso0.add(&iso1.mul(&dx));
        let mut rhs_dir = dir0.add(&dir1.mul(&dx));
        let norm = lhs
            .coeffs()
            .iter()
            .find(|v| v.norm() > 0.0)
            .cloned()
            .ok_or(Error::NotPolynomial)?;
        let inv = Complex64::ONE / norm;
        lhs = lhs.scale(&inv);
        rhs_iso = rhs_iso.scale(&inv);
        rhs_dir = rhs_dir.scale(&inv);
        if !rhs_dir.is_zero() {
            split = true;
        }
        copies.push(CopyForm { lhs, rhs_iso, rhs_dir });
    }
    let c1 = copies.pop().unwrap();
    let c0 = copies.pop().unwrap();
    Ok(DifferentialBoundaryForm { split, copies: [c0, c1] })
}

fn fmt_real(v: f64) -> String {
    let r = (v * 1e12).round() / 1e12;
    format!("{r}")
}

fn fmt_complex(z: Complex64) -> String {
    let re = (z.re * 1e12).round() / 1e12;
    let im = (z.im * 1e12).round() / 1e12;
    match (re == 0.0, im == 0.0) {
        (false, true) => fmt_real(re),
        (true, false) => match im {
            v if v == 1.0 => "i".into(),
            v if v == -1.0 => "-i".into(),
            v => format!("{}i", fmt_real(v)),
        },
        (true, true) => "0".into(),
        (false, false) => {
            let im_s = match im {
                v if v == 1.0 => "+ i".into(),
                v if v == -1.0 => "- i".into(),
                v if v > 0.0 => format!("+ {}i", fmt_real(v)),
                v => format!("- {}i", fmt_real(-v)),
            };
            format!("({} {})", fmt_real(re), im_s)
        }
    }
}

fn fmt_term(coeff: Complex64, order: usize) -> String {
    let dx = match order {
        0 => String::new(),
        1 => "Dx".into(),
        m => format!("Dx^{m}"),
    };
    let cs = fmt_complex(coeff);
    match (cs.as_str(), dx.is_empty()) {
        ("1", false) => dx,
        ("-1", false) => format!("-{dx}"),
        (_, true) => cs,
        _ => format!("{cs}*{dx}"),
    }
}

fn render_side(p: &Poly<Complex64>, base: &str) -> String {
    let terms: Vec<(usize, Complex64)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(m, v)| (m, *v))
        .collect();
    match terms.len() {
        0 => "0".into(),
        1 => {
            let (m, v) = terms[0];
            let t = fmt_term(v, m);
            if m == 0 && (t == "1") {
                base.into()
            } else if m == 0 && t == "-1" {
                format!("-{base}")
            } else if m == 0 {
                format!("{t}*{base}")
            } else {
                format!("{t} {base}")
            }
        }
        _ => {
            let mut inner = String::new();
            for (idx, (m, v)) in terms.iter().enumerate() {
                let t = fmt_term(*v, *m);
                if idx == 0 {
                    inner.push_str(&t);
                } else if let Some(rest) = t.strip_prefix('-') {
                    inner.push_str(&format!(" - {rest}"));
                } else {
                    inner.push_str(&format!(" + {t}"));
                }
            }
            format!("({inner}) {base}")
        }
    }
}

impl DifferentialBoundaryForm {
    /// Fixed ASCII rendering, one relation per line; with a nontrivial
    /// direction matrix the field splits into its `PhiR`/`PhiL` parts.
    pub fn render(&self) -> String {
        let mut lines = Vec::new();
        for copy in &self.copies {
            if self.split {
                let rhs_r = copy.rhs_iso.add(&copy.rhs_dir);
                let rhs_l = copy.rhs_iso.sub(&copy.rhs_dir);
                lines.push(format!(
                    "{} = {}",
                    render_side(&copy.lhs, "PhiR(+0)"),
                    render_side(&rhs_r, "PhiR(-0)")
                ));
                lines.push(format!(
                    "{} = {}",
                    render_side(&copy.lhs, "PhiL(+0)"),
                    render_side(&rhs_l, "PhiL(-0)")
                ));
            } else {
                lines.push(format!(
                    "{} = {}",
                    render_side(&copy.lhs, "Phi(+0)"),
                    render_side(&copy.rhs_iso, "Phi(-0)")
                ));
            }
        }
        lines.join("\n") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Sampler;
    use crate::spectral::RatFn;

    fn odd_fn(s: &mut Sampler) -> SpectralScalar {
        // p k / (1 + q k^2) with q > 0: odd, real, pole-free on the axis.
        let p = s.real();
        let q = s.real().abs() + 0.1;
        SpectralScalar::rational(
            vec![c(0.0, 0.0), c(p, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(q, 0.0)],
        )
    }

    fn even_fn(s: &mut Sampler) -> SpectralScalar {
        let b0 = s.real();
        let b2 = s.real();
        SpectralScalar::rational(
            vec![c(b0, 0.0), c(0.0, 0.0), c(b2, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        )
    }

    fn case_params(s: &mut Sampler, n: usize, case: BoundaryCase) -> ClassifiedParams {
        let eps_minus = s.sign();
        let omega = if eps_minus < 0.0 { even_fn(s) } else { odd_fn(s) };
        let (e_diag, a) = match case {
            BoundaryCase::Scalar => (vec![1.0; n], ExtendedReal::Finite(s.real())),
            BoundaryCase::Direction => {
                let mut e = s.sign_diag(n);
                e[0] = -1.0;
                (e, ExtendedReal::Infinity)
            }
            BoundaryCase::GeneralA => {
                let mut e = s.sign_diag(n);
                e[0] = -1.0;
                (e, ExtendedReal::Finite(s.real_avoiding(&[0.0])))
            }
        };
        ClassifiedParams {
            n,
            m: s.unitary(n),
            e_diag,
            a,
            eps_plus: 1.0,
            eps_minus,
            big_a: odd_fn(s),
            big_b: even_fn(s),
            big_c: odd_fn(s),
            omega,
        }
    }

    fn reduced(n: usize, e_diag: Vec<f64>, a: ExtendedReal, eps_minus: f64, omega: SpectralScalar) -> ClassifiedParams {
        ClassifiedParams {
            n,
            m: DMatrix::identity(n, n),
            e_diag,
            a,
            eps_plus: 1.0,
            eps_minus,
            big_a: SpectralScalar::zero(),
            big_b: SpectralScalar::zero(),
            big_c: SpectralScalar::zero(),
            omega,
        }
    }

    #[test]
    fn case_solutions_satisfy_functional_equations() {
        let mut s = Sampler::new(41);
        for case in [BoundaryCase::Scalar, BoundaryCase::Direction, BoundaryCase::GeneralA] {
            for n in [1usize, 2, 3] {
                if n == 1 && case != BoundaryCase::Scalar {
                    continue;
                }
                let p = case_params(&mut s, n, case);
                let rep = build_classified(&p).unwrap();
                let bp = build_case_solution(case, &p).unwrap();
                let ks = s.generic_momenta(20);
                for copy in 0..2 {
                    let fp = bp.functional_pair(copy);
                    let r = check_functional_equations(&fp, &rep, &ks).unwrap();
                    assert!(r < 1e-12, "{case:?} n={n} copy={copy}: residual {r:e}");
                }
                let r = verify_on_free_solutions(&bp, &rep, &ks).unwrap();
                assert!(r < 1e-12, "{case:?} n={n}: free-solution residual {r:e}");
            }
        }
    }

    #[test]
    fn doubled_y_breaks_functional_equations() {
        let mut s = Sampler::new(42);
        let p = case_params(&mut s, 2, BoundaryCase::Direction);
        let rep = build_classified(&p).unwrap();
        let bp = build_case_solution(BoundaryCase::Direction, &p).unwrap();
        let mut fp = bp.functional_pair(0);
        fp.y = fp.y.scale_const(c(2.0, 0.0));
        let ks = s.generic_momenta(10);
        let r = check_functional_equations(&fp, &rep, &ks).unwrap();
        assert!(r > 1e-3, "doubled Y must fail, got {r:e}");
    }

    #[test]
    fn case_preconditions_enforced() {
        let mut s = Sampler::new(43);
        let p = case_params(&mut s, 2, BoundaryCase::Direction);
        assert!(matches!(
            build_case_solution(BoundaryCase::Scalar, &p),
            Err(Error::CaseMismatch(_))
        ));
        assert!(matches!(
            build_case_solution(BoundaryCase::GeneralA, &p),
            Err(Error::CaseMismatch(_))
        ));
        let q = case_params(&mut s, 2, BoundaryCase::GeneralA);
        assert!(matches!(
            build_case_solution(BoundaryCase::Direction, &q),
            Err(Error::CaseMismatch(_))
        ));
    }

    #[test]
    fn omega_parity_enforced() {
        // An odd omega with eps- = -1 violates the declared parity.
        let p = reduced(1, vec![1.0], ExtendedReal::Finite(0.0), -1.0, SpectralScalar::var());
        assert!(matches!(
            build_case_solution(BoundaryCase::Scalar, &p),
            Err(Error::Parity { .. })
        ));
    }

    #[test]
    fn golden_renderings() {
        let one = SpectralScalar::one();
        let var = SpectralScalar::var();
        let cases = [
            (
                build_case_solution(
                    BoundaryCase::Scalar,
                    &reduced(2, vec![1.0, 1.0], ExtendedReal::Finite(0.0), -1.0, one.clone()),
                )
                .unwrap(),
                include_str!("../tests/golden/scalar-omega-1.txt"),
            ),
            (
                build_case_solution(
                    BoundaryCase::Scalar,
                    &reduced(2, vec![1.0, 1.0], ExtendedReal::Finite(0.0), 1.0, var.clone()),
                )
                .unwrap(),
                include_str!("../tests/golden/scalar-omega-k.txt"),
            ),
            (
                build_case_solution(
                    BoundaryCase::Direction,
                    &reduced(2, vec![1.0, -1.0], ExtendedReal::Infinity, -1.0, one),
                )
                .unwrap(),
                include_str!("../tests/golden/direction-omega-1.txt"),
            ),
            (
                build_case_solution(
                    BoundaryCase::Direction,
                    &reduced(2, vec![1.0, -1.0], ExtendedReal::Infinity, 1.0, var),
                )
                .unwrap(),
                include_str!("../tests/golden/direction-omega-k.txt"),
            ),
        ];
        for (bp, golden) in &cases {
            let form = render_differential_form(bp).unwrap();
            assert_eq!(form.render(), *golden);
        }
    }

    #[test]
    fn general_interpolation_rendering() {
        let p = reduced(2, vec![1.0, -1.0], ExtendedReal::Finite(0.5), -1.0, SpectralScalar::one());
        let bp = build_case_solution(BoundaryCase::GeneralA, &p).unwrap();
        let form = render_differential_form(&bp).unwrap();
        let out = form.render();
        assert!(
            out.starts_with("(1 + 0.5*Dx) PhiR(+0) = (1 + 0.5*Dx) PhiR(-0)"),
            "got:\n{out}"
        );
        assert!(out.contains("(1 + 0.5*Dx) PhiL(+0) = (1 - 0.5*Dx) PhiL(-0)"), "got:\n{out}");
    }

    #[test]
    fn rational_entries_not_renderable() {
        let omega = SpectralScalar::Rational(RatFn::new(
            Poly::new(vec![c(0.0, 0.0), c(1.0, 0.0)]),
            Poly::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
        ));
        let p = reduced(1, vec![1.0], ExtendedReal::Finite(0.0), 1.0, omega);
        let bp = build_case_solution(BoundaryCase::Scalar, &p).unwrap();
        assert!(matches!(render_differential_form(&bp), Err(Error::NotPolynomial)));
    }

    #[test]
    fn derivative_map_is_a_morphism() {
        // Matrix polynomials with integer coefficients: mapping the product
        // equals composing the mapped operators, coefficient-exact.
        let mut s = Sampler::new(44);
        for _ in 0..10 {
            let n = 2;
            let mut rand_poly = || -> Vec<Vec<Poly<Complex64>>> {
                (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                Poly::new(
                                    (0..4)
                                        .map(|_| {
                                            c(
                                                (s.real() as i64 % 5) as f64,
                                                (s.real() as i64 % 5) as f64,
                                            )
                                        })
                                        .collect(),
                                )
                            })
                            .collect()
                    })
                    .collect()
            };
            let a = rand_poly();
            let b = rand_poly();
            let matmul = |x: &Vec<Vec<Poly<Complex64>>>, y: &Vec<Vec<Poly<Complex64>>>| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let mut acc = Poly::zero();
                                for l in 0..n {
                                    acc = acc.add(&x[i][l].mul(&y[l][j]));
                                }
                                acc
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>()
            };
            let mapped = |x: &Vec<Vec<Poly<Complex64>>>| {
                x.iter()
                    .map(|row| row.iter().map(dx_map).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            };
            let lhs = mapped(&matmul(&a, &b));
            let rhs = matmul(&mapped(&a), &mapped(&b));
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(lhs[i][j].coeffs(), rhs[i][j].coeffs());
                }
            }
        }
    }

    #[test]
    fn jump_relation_on_sampled_parameters() {
        let mut s = Sampler::new(45);
        for _ in 0..20 {
            let p = crate::defect_rep::sample_nls_params(&mut s);
            let ks = s.generic_momenta(5);
            for n in [1usize, 2] {
                let r = check_jump_relation(&p, n, &ks).unwrap();
                assert!(r < 1e-12, "jump residual {r:e}");
            }
        }
    }

    #[test]
    fn jump_relation_examples() {
        let ks = [0.7, 1.3, 2.9];
        let trivial = NLSDefectParams { a: 1.0, b: 0.0, c: 0.0, d: 1.0, alpha: Complex64::ONE };
        assert!(check_jump_relation(&trivial, 2, &ks).unwrap() < 1e-12);
        let resonant = NLSDefectParams { a: 0.0, b: 1.0, c: -1.0, d: 0.0, alpha: Complex64::ONE };
        assert!(check_jump_relation(&resonant, 1, &ks).unwrap() < 1e-12);
        let phase = NLSDefectParams { a: 1.0, b: 0.0, c: 0.0, d: 1.0, alpha: c(0.0, 1.0) };
        assert!(check_jump_relation(&phase, 1, &ks).unwrap() < 1e-12);
        // The resonant reflection at k = 1 vanishes: the solution is purely
        // transmitted there.
        let rep = build_nls_defect(&resonant, 1).unwrap();
        let sol = FreeSolution::new(&rep, 1.0, true).unwrap();
        let (val, _) = sol.limits(Side::Below);
        assert!((val[(0, 0)] - Complex64::ONE).norm() < 1e-13);
    }

    #[test]
    fn mismatched_pair_fails_free_solutions() {
        let mut s = Sampler::new(46);
        let pd = case_params(&mut s, 2, BoundaryCase::Direction);
        let rep = build_classified(&pd).unwrap();
        let ps = reduced(2, vec![1.0, 1.0], ExtendedReal::Finite(0.0), pd.eps_minus, pd.omega.clone());
        let bp = build_case_solution(BoundaryCase::Scalar, &ps).unwrap();
        let ks = s.generic_momenta(5);
        let r = verify_on_free_solutions(&bp, &rep, &ks).unwrap();
        assert!(r > 1e-3, "mismatched case must fail, got {r:e}");
    }

    #[test]
    fn pure_transmission_boundary_is_trivial() {
        // omega = 1 with the reduced parametrization: no defect at all.
        let p = reduced(2, vec![1.0, 1.0], ExtendedReal::Finite(0.0), -1.0, SpectralScalar::one());
        let bp = build_case_solution(BoundaryCase::Scalar, &p).unwrap();
        let form = render_differential_form(&bp).unwrap();
        assert_eq!(form.render(), "Phi(+0) = Phi(-0)\nDx Phi(+0) = Dx Phi(-0)\n");
    }
}
