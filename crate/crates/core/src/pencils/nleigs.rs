use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fullrank::BlockFullRank;
use crate::linearize::Verdict;
use crate::matrix::{ConstMatrix, Matrix};
use crate::polymat::{PolyMatrix, SmithForm};
use crate::psm::Psm;
use crate::ratmat::{RatMatrix, Region};
use crate::scalars::{Point, Poly, Rat, RatFun};

use super::times;

/// Nodes `σ₀ … σ_{N−1}`, poles `ξ₁ … ξ_N` (nonzero or infinite) and
/// scalings `β₀ … β_N` (nonzero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NleigsParams {
    pub sigma: Vec<Rat>,
    pub xi: Vec<Point>,
    pub beta: Vec<Rat>,
}

/// `Q_N = Σ bᵢ·Dᵢ` over `D₀ … D_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NleigsBasic {
    pub params: NleigsParams,
    pub d: Vec<ConstMatrix>,
}

/// `Q̃_N = Σ_{i≤p} bᵢ·D̃ᵢ + Σ_{i>p} bᵢ·L̃ᵢ·Ũᵀ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NleigsLowRank {
    pub params: NleigsParams,
    /// `D̃₀ … D̃_p`.
    pub d: Vec<ConstMatrix>,
    /// `L̃_{p+1} … L̃_N`.
    pub l: Vec<ConstMatrix>,
    pub u: ConstMatrix,
}

/// The rational matrix, the pencil `[M; K]`, and its two readings.
#[derive(Clone, Debug)]
pub struct NleigsBuild {
    pub q: RatMatrix,
    pub pencil: PolyMatrix,
    /// State: `K` without its first block column.
    pub psm: Psm,
    pub fullrank: BlockFullRank,
    pub dual: RatMatrix,
}

/// Rank of the test matrix at one finite pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleCheck {
    pub xi: Rat,
    pub rank: usize,
    pub needed: usize,
}

impl PoleCheck {
    pub fn passed(&self) -> bool {
        self.rank == self.needed
    }
}

/// Outcome of a pole-by-pole minimality test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NleigsCertificate {
    pub minimal: bool,
    /// False when the test is only sufficient, so a failure proves nothing.
    pub exact: bool,
    pub poles: Vec<PoleCheck>,
    /// Where the system-matrix view linearizes `Q`, when minimal.
    pub region: Option<Region>,
    pub caveat: Option<String>,
}

/// Which low-rank test to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowRankTest {
    /// Full column rank of the stacked `(2m + r) × (m + r)` matrix.
    Full,
    /// Only the `m × r` block; needs `ξ₁ … ξ_p` infinite.
    LowRankBlock,
    /// Invertibility of the square matrix without the middle block row.
    Square,
}

impl NleigsParams {
    pub fn new(sigma: Vec<Rat>, xi: Vec<Point>, beta: Vec<Rat>) -> Result<Self> {
        let n = sigma.len();
        if n == 0 || xi.len() != n || beta.len() != n + 1 {
            return Err(Error::InvalidParams(format!(
                "need N >= 1 nodes, N poles and N + 1 scalings; got {}, {}, {}",
                n,
                xi.len(),
                beta.len()
            )));
        }
        if beta.iter().any(Zero::is_zero) {
            return Err(Error::InvalidParams("scalings must be nonzero".into()));
        }
        if xi.iter().any(|x| matches!(x, Point::Finite(v) if v.is_zero())) {
            return Err(Error::InvalidParams("poles must be nonzero".into()));
        }
        Ok(NleigsParams { sigma, xi, beta })
    }

    /// `N`.
    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// `1 − λ/ξᵢ` for `i ∈ 1..=N`; constant 1 at an infinite pole.
    pub fn pole_factor(&self, i: usize) -> Poly {
        match &self.xi[i - 1] {
            Point::Infinity => Poly::one(),
            Point::Finite(x) => Poly::new(vec![Rat::one(), -x.recip()]),
        }
    }

    /// `gᵢ = βᵢ(1 − λ/ξᵢ)` for `i ∈ 1..=N`.
    pub fn g(&self, i: usize) -> Poly {
        self.pole_factor(i).scale(&self.beta[i])
    }

    /// `hⱼ = λ − σⱼ` for `j ∈ 0..N`.
    pub fn h(&self, j: usize) -> Poly {
        Poly::linear_root(&self.sigma[j])
    }

    /// `bᵢ = (1/β₀)·Π_{k≤i} h_{k−1}/g_k`.
    pub fn b(&self, i: usize) -> Result<RatFun> {
        if i > self.len() {
            return Err(Error::InvalidParams(format!("b index {i} exceeds N = {}", self.len())));
        }
        let mut num = Poly::constant(self.beta[0].recip());
        let mut den = Poly::one();
        for k in 1..=i {
            num = &num * &self.h(k - 1);
            den = &den * &self.g(k);
        }
        crate::scalars::reduce(&num, &den)
    }

    /// `i_N`, the number of infinite poles.
    pub fn infinite_poles(&self) -> usize {
        self.xi.iter().filter(|x| matches!(x, Point::Infinity)).count()
    }

    /// Distinct finite values among `ξ₁ … ξ_k`.
    pub fn finite_poles(&self, k: usize) -> BTreeSet<Rat> {
        self.xi[..k]
            .iter()
            .filter_map(|x| match x {
                Point::Finite(v) => Some(v.clone()),
                Point::Infinity => None,
            })
            .collect()
    }

    /// Fails when some pole equals some node.
    pub fn check_distinct(&self) -> Result<()> {
        for x in self.finite_poles(self.len()) {
            if self.sigma.contains(&x) {
                return Err(Error::NodePoleCoincidence(format!("pole {x} is also a node")));
            }
        }
        Ok(())
    }

    /// Where `β₀(1 − λ/ξ_N)·Q` and `Q` are equivalent.
    fn last_pole_region(&self) -> Region {
        match &self.xi[self.len() - 1] {
            Point::Infinity => Region::AllF,
            Point::Finite(x) => Region::except([x.clone()]),
        }
    }

    fn caveat(&self) -> Option<String> {
        match &self.xi[self.len() - 1] {
            Point::Infinity => None,
            Point::Finite(x) => Some(format!("no pole information at the last pole {x}")),
        }
    }

    /// `Π_{k=from..=to} g_k/h_{k−1}` (empty product is 1).
    fn ratio_product(&self, from: usize, to: usize) -> RatFun {
        let mut num = Poly::one();
        let mut den = Poly::one();
        for k in from..=to {
            num = &num * &self.g(k);
            den = &den * &self.h(k - 1);
        }
        RatFun::new(num, den)
    }

    /// `Π_{i=from..=to} g_i/h_i`.
    fn shifted_ratio_product(&self, from: usize, to: usize) -> RatFun {
        let mut num = Poly::one();
        let mut den = Poly::one();
        for i in from..=to {
            num = &num * &self.g(i);
            den = &den * &self.h(i);
        }
        RatFun::new(num, den)
    }
}

/// Shared shape of both families: block column `k` has width `w_k`;
/// `K` has `−h_j·left_j` at `(j, j)` and `g_{j+1}·I` at `(j, j + 1)`;
/// `M` has `(g_N/β_N)·coef_k` in column `k` plus `(h_{N−1}/β_N)·last` in
/// the final column; the dual carries `b_k·dual_k/(1 − λ/ξ_N)`.
struct Chain<'a> {
    params: &'a NleigsParams,
    m: usize,
    coef: Vec<ConstMatrix>,
    last: ConstMatrix,
    left: Vec<ConstMatrix>,
    dual: Vec<ConstMatrix>,
    q: RatMatrix,
}

impl Chain<'_> {
    fn build(self) -> Result<NleigsBuild> {
        let par = self.params;
        let n = par.len();
        let beta_n_inv = par.beta[n].recip();
        let gn = par.g(n).scale(&beta_n_inv);
        let mut m_blocks: Vec<PolyMatrix> = self.coef.iter().map(|c| times(&gn, c)).collect();
        let tail = times(&par.h(n - 1).scale(&beta_n_inv), &self.last);
        m_blocks[n - 1] = m_blocks[n - 1].add(&tail)?;
        let m_row = super::hcat(&m_blocks)?;

        let widths: Vec<usize> = self.coef.iter().map(Matrix::cols).collect();
        let k = if n > 1 {
            let diag: Vec<PolyMatrix> = (0..n - 1).map(|j| times(&-par.h(j), &self.left[j])).collect();
            let sup: Vec<PolyMatrix> =
                (0..n - 1).map(|j| PolyMatrix::identity(widths[j + 1]).scale(&par.g(j + 1))).collect();
            let rows: Vec<Vec<Option<&PolyMatrix>>> = (0..n - 1)
                .map(|j| {
                    let mut row = vec![None; n];
                    row[j] = Some(&diag[j]);
                    row[j + 1] = Some(&sup[j]);
                    row
                })
                .collect();
            Some(Matrix::block(&rows)?)
        } else {
            None
        };
        let pencil = match &k {
            Some(k) => m_row.vstack(k)?,
            None => m_row.clone(),
        };

        let rows = pencil.rows();
        let cols = pencil.cols();
        let psm = Psm::new(pencil.clone(), (self.m..rows).collect(), (self.m..cols).collect())?;
        let fullrank = BlockFullRank::new(m_row, k, None)?;

        let scale = RatFun::new(Poly::one(), par.pole_factor(n));
        let dual_blocks: Vec<RatMatrix> = self
            .dual
            .iter()
            .enumerate()
            .map(|(i, e)| Ok(RatMatrix::from_const(e).scale(&(&par.b(i)? * &scale))))
            .collect::<Result<_>>()?;
        let dual = Matrix::block(&[dual_blocks.iter().map(Some).collect()])?;
        Ok(NleigsBuild { q: self.q, pencil, psm, fullrank, dual })
    }
}

fn check_square(ms: &[ConstMatrix], m: usize, what: &str) -> Result<()> {
    if ms.iter().any(|x| x.rows() != m || x.cols() != m) {
        return Err(Error::Dimension(format!("{what} must be {m}×{m}")));
    }
    Ok(())
}

fn pole_checks(poles: BTreeSet<Rat>, needed: usize, mut rank_at: impl FnMut(&Rat) -> usize) -> Vec<PoleCheck> {
    poles.into_iter().map(|xi| PoleCheck { rank: rank_at(&xi), xi, needed }).collect()
}

impl NleigsBasic {
    pub fn new(params: NleigsParams, d: Vec<ConstMatrix>) -> Result<Self> {
        if d.len() != params.len() + 1 {
            return Err(Error::Dimension(format!("need {} coefficients, got {}", params.len() + 1, d.len())));
        }
        check_square(&d, d[0].rows(), "coefficients")?;
        Ok(NleigsBasic { params, d })
    }

    pub fn size(&self) -> usize {
        self.d[0].rows()
    }

    pub fn q(&self) -> Result<RatMatrix> {
        let m = self.size();
        let mut q = RatMatrix::zeros(m, m);
        for (i, di) in self.d.iter().enumerate() {
            q = q.add(&RatMatrix::from_const(di).scale(&self.params.b(i)?))?;
        }
        Ok(q)
    }

    pub fn build(&self) -> Result<NleigsBuild> {
        let m = self.size();
        let n = self.params.len();
        let eye = ConstMatrix::identity(m);
        Chain {
            params: &self.params,
            m,
            coef: self.d[..n].to_vec(),
            last: self.d[n].clone(),
            left: vec![eye.clone(); n - 1],
            dual: vec![eye; n],
            q: self.q()?,
        }
        .build()
    }

    /// `R_N = Σ_{j=1}^{N−1} (Π_{k>j} g_k/h_{k−1})·D_j + D_N`.
    pub fn remainder(&self) -> RatMatrix {
        let n = self.params.len();
        let mut r = RatMatrix::from_const(&self.d[n]);
        for j in 1..n {
            let f = self.params.ratio_product(j + 1, n);
            r = r.add(&RatMatrix::from_const(&self.d[j]).scale(&f)).expect("same size");
        }
        r
    }

    /// Nonsingularity of `R_N` at every finite pole among `ξ₁ … ξ_{N−1}`.
    pub fn minimality(&self) -> Result<NleigsCertificate> {
        self.params.check_distinct()?;
        let r = self.remainder();
        let m = self.size();
        let poles = pole_checks(self.params.finite_poles(self.params.len() - 1), m, |xi| {
            r.eval(xi).expect("poles avoid the nodes").rank()
        });
        Ok(certificate(&self.params, poles, true))
    }

    /// Smith form of the state block: `(N−2)m` ones, then `m` copies of
    /// the monic product of `λ − ξᵢ` over the finite `ξ₁ … ξ_{N−1}`.
    pub fn pole_structure(&self) -> Result<SmithForm> {
        self.params.check_distinct()?;
        let n = self.params.len();
        let m = self.size();
        let size = (n - 1) * m;
        let mut p = Poly::one();
        for x in &self.params.xi[..n - 1] {
            if let Point::Finite(v) = x {
                p = &p * &Poly::linear_root(v);
            }
        }
        let mut invariant_polys = vec![Poly::one(); size - m.min(size)];
        invariant_polys.extend(std::iter::repeat_n(p, m.min(size)));
        Ok(SmithForm { invariant_polys, rank: size, rows: size, cols: size })
    }
}

fn certificate(params: &NleigsParams, poles: Vec<PoleCheck>, exact: bool) -> NleigsCertificate {
    let minimal = poles.iter().all(PoleCheck::passed);
    NleigsCertificate {
        minimal,
        exact,
        region: minimal.then(|| params.last_pole_region()),
        caveat: params.caveat(),
        poles,
    }
}

impl NleigsCertificate {
    pub fn verdict(&self) -> Verdict {
        match self.poles.iter().find(|c| !c.passed()) {
            None => Verdict::yes(),
            Some(c) => Verdict::no(format!("rank {} < {} at pole {}", c.rank, c.needed, c.xi)),
        }
    }
}

impl fmt::Display for NleigsCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "minimal: {}{}", self.minimal, if self.exact { "" } else { " (sufficient test only)" })?;
        for c in &self.poles {
            writeln!(f, "pole {}: rank {}/{} {}", c.xi, c.rank, c.needed, if c.passed() { "ok" } else { "fails" })?;
        }
        if let Some(r) = &self.region {
            writeln!(f, "linearization region: {r}")?;
        }
        if let Some(c) = &self.caveat {
            writeln!(f, "caveat: {c}")?;
        }
        Ok(())
    }
}

impl NleigsLowRank {
    pub fn new(params: NleigsParams, d: Vec<ConstMatrix>, l: Vec<ConstMatrix>, u: ConstMatrix) -> Result<Self> {
        let n = params.len();
        if d.is_empty() || d.len() + l.len() != n + 1 {
            return Err(Error::Dimension(format!("need p + 1 dense and N − p low-rank terms with N = {n}")));
        }
        let p = d.len() - 1;
        if p + 2 > n {
            return Err(Error::InvalidParams(format!("split index p = {p} must satisfy p <= N - 2 = {}", n as i64 - 2)));
        }
        let m = d[0].rows();
        let r = u.cols();
        check_square(&d, m, "dense terms")?;
        if u.rows() != m || r > m || l.iter().any(|x| x.rows() != m || x.cols() != r) {
            return Err(Error::Dimension(format!("U and the low-rank terms must be {m}×{r} with r <= m")));
        }
        Ok(NleigsLowRank { params, d, l, u })
    }

    /// Split index `p`.
    pub fn split(&self) -> usize {
        self.d.len() - 1
    }

    pub fn size(&self) -> usize {
        self.u.rows()
    }

    pub fn rank(&self) -> usize {
        self.u.cols()
    }

    /// `L̃ᵢ` for `i ∈ p+1..=N`.
    fn low(&self, i: usize) -> &ConstMatrix {
        &self.l[i - self.split() - 1]
    }

    pub fn q(&self) -> Result<RatMatrix> {
        let m = self.size();
        let p = self.split();
        let ut = self.u.transpose();
        let mut q = RatMatrix::zeros(m, m);
        for (i, di) in self.d.iter().enumerate() {
            q = q.add(&RatMatrix::from_const(di).scale(&self.params.b(i)?))?;
        }
        for i in p + 1..=self.params.len() {
            q = q.add(&RatMatrix::from_const(&self.low(i).mul(&ut)?).scale(&self.params.b(i)?))?;
        }
        Ok(q)
    }

    pub fn build(&self) -> Result<NleigsBuild> {
        let (m, r, p, n) = (self.size(), self.rank(), self.split(), self.params.len());
        let mut coef = self.d.clone();
        coef.extend((p + 1..n).map(|i| self.low(i).clone()));
        let left = (0..n - 1)
            .map(|j| match j.cmp(&p) {
                std::cmp::Ordering::Less => ConstMatrix::identity(m),
                std::cmp::Ordering::Equal => self.u.transpose(),
                std::cmp::Ordering::Greater => ConstMatrix::identity(r),
            })
            .collect();
        let dual = (0..n).map(|k| if k <= p { ConstMatrix::identity(m) } else { self.u.clone() }).collect();
        Chain { params: &self.params, m, coef, last: self.low(n).clone(), left, dual, q: self.q()? }.build()
    }

    /// The `(2m + r) × (m + r)` test matrix, from its three block rows.
    pub fn test_matrix(&self) -> Result<RatMatrix> {
        let (m, r, p, n) = (self.size(), self.rank(), self.split(), self.params.len());
        if p == 0 {
            return Err(Error::InvalidParams("the rank test needs split index p >= 1".into()));
        }
        let par = &self.params;
        let mut dense = RatMatrix::from_const(&self.d[p]);
        for j in 1..p {
            dense = dense.add(&RatMatrix::from_const(&self.d[j]).scale(&par.ratio_product(j + 1, p)))?;
        }
        let dense = dense.scale(&RatFun::new(par.g(n), par.h(n - 1)));
        let mut low = RatMatrix::from_const(self.low(n));
        for j in p + 1..n {
            low = low.add(&RatMatrix::from_const(self.low(j)).scale(&par.ratio_product(j + 1, n)))?;
        }
        let mid = RatMatrix::identity(m).scale(&(&par.shifted_ratio_product(1, p - 1) * &RatFun::from_poly(par.g(p))));
        let u_row = RatMatrix::from_const(&self.u.transpose()).scale(&-RatFun::from_poly(par.h(p)));
        let corner =
            RatMatrix::identity(r).scale(&(&par.shifted_ratio_product(p + 1, n - 2) * &RatFun::from_poly(par.g(n - 1))));
        Matrix::block(&[vec![Some(&dense), Some(&low)], vec![Some(&mid), None], vec![Some(&u_row), Some(&corner)]])
    }

    /// Pole-by-pole minimality of the system-matrix view.
    pub fn minimality(&self, test: LowRankTest) -> Result<NleigsCertificate> {
        let (m, r, p, n) = (self.size(), self.rank(), self.split(), self.params.len());
        if self.u.rank() != r {
            return Err(Error::RankDeficient(format!("U must have rank {r}")));
        }
        self.params.check_distinct()?;
        let full = self.test_matrix()?;
        let poles = self.params.finite_poles(n - 1);
        let all_rows: Vec<usize> = (0..2 * m + r).collect();
        let cert = match test {
            LowRankTest::Full => {
                let checks = pole_checks(poles, m + r, |xi| full.eval(xi).expect("defined off the nodes").rank());
                certificate(&self.params, checks, true)
            }
            LowRankTest::LowRankBlock => {
                if !self.params.finite_poles(p).is_empty() {
                    return Err(Error::InvalidParams("the block test needs the first p poles infinite".into()));
                }
                let block = full.select(&all_rows[..m], &(m..m + r).collect::<Vec<_>>());
                let checks = pole_checks(poles, r, |xi| block.eval(xi).expect("defined off the nodes").rank());
                certificate(&self.params, checks, true)
            }
            LowRankTest::Square => {
                let keep: Vec<usize> = (0..m).chain(2 * m..2 * m + r).collect();
                let square = full.select(&keep, &(0..m + r).collect::<Vec<_>>());
                let checks = pole_checks(poles, m + r, |xi| square.eval(xi).expect("defined off the nodes").rank());
                let mut cert = certificate(&self.params, checks, false);
                if !cert.minimal {
                    cert.region = None;
                }
                cert
            }
        };
        Ok(cert)
    }
}
