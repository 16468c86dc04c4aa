//! Quantum seeds with principal coefficients: exchange-matrix mutation, the
//! quantum exchange relation solved by exact left division inside the initial
//! torus, and the structural checks (compatibility, block form of Λ, tropical
//! duality, sign coherence) that every mutated seed must satisfy.

use crate::qtorus::{SkewMatrix, TorusElement, TorusError};
use std::collections::BTreeSet;
use std::collections::VecDeque;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeedError {
    #[error("matrix has wrong shape: expected {expected}, got {got}")]
    Shape { expected: String, got: String },
    #[error("exchange matrix top block must be skew-symmetric")]
    NotSkew,
    #[error("mutation index {k} out of range 1..={n}")]
    IndexOutOfRange { k: usize, n: usize },
    #[error("cluster variables have odd doubled commutation exponent at ({i},{j})")]
    OddCommutation { i: usize, j: usize },
    #[error("exchange relation right side is not divisible by the old variable")]
    LaurentFailure,
    #[error("element is not homogeneous for the principal grading")]
    NotHomogeneous,
    #[error(transparent)]
    Torus(#[from] TorusError),
}

/// A dense integer matrix; rows × cols, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, SeedError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(SeedError::Shape {
                expected: format!("{r}x{c}"),
                got: "ragged".into(),
            });
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.entry(i, j)).collect()
    }

    pub fn row_list(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.entry(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.set(i, j, out.entry(i, j) + a * other.entry(k, j));
                }
            }
        }
        out
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.entry(i, j) == -self.entry(j, i)))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j) * v[j]).sum())
            .collect()
    }
}

/// Exchange-matrix mutation in direction k (1-based, k ≤ cols); acts on the
/// full (possibly rectangular) matrix.
pub fn mutate_matrix(b: &IntMatrix, k: usize) -> IntMatrix {
    let kk = k - 1;
    let mut out = IntMatrix::zeros(b.rows(), b.cols());
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            let v = if i == kk || j == kk {
                -b.entry(i, j)
            } else {
                let bik = b.entry(i, kk);
                let bkj = b.entry(kk, j);
                b.entry(i, j) + (bik * bkj.abs() + bik.abs() * bkj) / 2
            };
            out.set(i, j, v);
        }
    }
    out
}

/// The principal-coefficient extension of an n×n skew-symmetric B̃:
/// B = [B̃; I] (2n×n) and the standard compatible Λ = [[0,−I],[I,−B̃]],
/// which satisfies BᵀΛ = (I | 0).
pub fn principal_pair(btilde: &IntMatrix) -> Result<(IntMatrix, SkewMatrix), SeedError> {
    let n = btilde.rows();
    if btilde.cols() != n {
        return Err(SeedError::Shape {
            expected: format!("{n}x{n}"),
            got: format!("{}x{}", btilde.rows(), btilde.cols()),
        });
    }
    if !btilde.is_skew_symmetric() {
        return Err(SeedError::NotSkew);
    }
    let mut b = IntMatrix::zeros(2 * n, n);
    for i in 0..n {
        for j in 0..n {
            b.set(i, j, btilde.entry(i, j));
        }
        b.set(n + i, i, 1);
    }
    let mut l = IntMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        l.set(i, n + i, -1);
        l.set(n + i, i, 1);
        for j in 0..n {
            l.set(n + i, n + j, -btilde.entry(i, j));
        }
    }
    let lambda = SkewMatrix::new(l.row_list()).expect("principal lambda is skew");
    Ok((b, lambda))
}

/// Structural facts about a seed that mutation must preserve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizationReport {
    /// BᵀΛ = (I | 0) for the current exchange matrix and commutation form.
    pub compatibility: bool,
    /// Λ_current = [[0, −Gᵀ],[G, G·B̃ᵀ·Gᵀ]] with G the g-matrix and B̃ the
    /// current top block.
    pub lambda_block_form: bool,
    /// C·Gᵀ = I with C the current bottom block.
    pub tropical_duality: bool,
    /// every column of C has a single sign.
    pub sign_coherence: bool,
}

impl QuantizationReport {
    pub fn all_hold(&self) -> bool {
        self.compatibility && self.lambda_block_form && self.tropical_duality && self.sign_coherence
    }
}

/// A quantum seed with principal coefficients. Every cluster variable is
/// stored as an element of the fixed initial torus; `lambda_cur` is the
/// integer matrix with z_i z_j = q^{λ_ij} z_j z_i for the current cluster.
#[derive(Debug, Clone)]
pub struct QuantumSeed {
    n: usize,
    btilde0: IntMatrix,
    ambient: Arc<SkewMatrix>,
    b: IntMatrix,
    lambda_cur: IntMatrix,
    cluster: Vec<TorusElement>,
    history: Vec<usize>,
}

impl QuantumSeed {
    pub fn initial(btilde: IntMatrix) -> Result<Self, SeedError> {
        let n = btilde.rows();
        let (b, lambda) = principal_pair(&btilde)?;
        let lambda_cur = IntMatrix::from_rows(lambda.rows())?;
        let ambient = Arc::new(lambda);
        let cluster = (0..2 * n)
            .map(|i| {
                let mut e = vec![0i64; 2 * n];
                e[i] = 1;
                TorusElement::basis(Arc::clone(&ambient), e).expect("basis fits ambient")
            })
            .collect();
        Ok(QuantumSeed { n, btilde0: btilde, ambient, b, lambda_cur, cluster, history: vec![] })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient(&self) -> &Arc<SkewMatrix> {
        &self.ambient
    }

    pub fn btilde_initial(&self) -> &IntMatrix {
        &self.btilde0
    }

    pub fn b_matrix(&self) -> &IntMatrix {
        &self.b
    }

    pub fn lambda_current(&self) -> &IntMatrix {
        &self.lambda_cur
    }

    pub fn cluster(&self) -> &[TorusElement] {
        &self.cluster
    }

    pub fn history(&self) -> &[usize] {
        &self.history
    }

    /// The Λ-normalized ordered product N[a] = q^{½Σ_{i<j} a_i a_j λ_ji}·
    /// z_1^{a_1}···z_m^{a_m}; on the initial seed N[a] = M[a]. Exponents must
    /// be nonnegative.
    pub fn normalized_product(&self, a: &[i64]) -> Result<TorusElement, SeedError> {
        let m = 2 * self.n;
        if a.len() != m {
            return Err(SeedError::Shape { expected: format!("{m}"), got: format!("{}", a.len()) });
        }
        let mut twist = 0i64;
        for i in 0..m {
            for j in (i + 1)..m {
                twist += a[i] * a[j] * self.lambda_cur.entry(j, i);
            }
        }
        let mut prod = TorusElement::one(Arc::clone(&self.ambient));
        for (i, &ai) in a.iter().enumerate() {
            assert!(ai >= 0, "normalized products take nonnegative exponents");
            prod = prod.mul(&self.cluster[i].pow(ai as u32)?)?;
        }
        Ok(prod.shift_q(twist))
    }

    /// Mutate in direction k (1-based). The new variable is the exact left
    /// quotient of q^{½⟨row_k Λ, b⁺⟩}N[b⁺] + q^{½⟨row_k Λ, b⁻⟩}N[b⁻] by the
    /// old one; Λ is then recomputed from pairwise commutation exponents.
    pub fn mutate(&self, k: usize) -> Result<Self, SeedError> {
        if k == 0 || k > self.n {
            return Err(SeedError::IndexOutOfRange { k, n: self.n });
        }
        let kk = k - 1;
        let col = self.b.col(kk);
        let bp: Vec<i64> = col.iter().map(|&v| v.max(0)).collect();
        let bm: Vec<i64> = col.iter().map(|&v| (-v).max(0)).collect();
        let lrow = self.lambda_cur.row(kk);
        let dot = |a: &[i64]| -> i64 { lrow.iter().zip(a).map(|(x, y)| x * y).sum() };
        let rhs = self
            .normalized_product(&bp)?
            .shift_q(dot(&bp))
            .add(&self.normalized_product(&bm)?.shift_q(dot(&bm)))?;
        let new_var = self.cluster[kk].left_quotient(&rhs).map_err(|e| match e {
            TorusError::InexactDivision => SeedError::LaurentFailure,
            other => SeedError::Torus(other),
        })?;

        let mut cluster = self.cluster.clone();
        cluster[kk] = new_var;
        let mut lambda_cur = self.lambda_cur.clone();
        for j in 0..2 * self.n {
            if j == kk {
                lambda_cur.set(kk, kk, 0);
                continue;
            }
            let doubled = cluster[kk].commutation_exponent(&cluster[j])?;
            if doubled % 2 != 0 {
                return Err(SeedError::OddCommutation { i: kk, j });
            }
            lambda_cur.set(kk, j, doubled / 2);
            lambda_cur.set(j, kk, -doubled / 2);
        }
        let mut history = self.history.clone();
        history.push(k);
        Ok(QuantumSeed {
            n: self.n,
            btilde0: self.btilde0.clone(),
            ambient: Arc::clone(&self.ambient),
            b: mutate_matrix(&self.b, k),
            lambda_cur,
            cluster,
            history,
        })
    }

    pub fn mutate_sequence(&self, ks: &[usize]) -> Result<Self, SeedError> {
        let mut s = self.clone();
        for &k in ks {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    /// The n×n g-matrix of the current cluster: column j is the principal
    /// degree of the j-th mutable variable.
    pub fn g_matrix(&self) -> Result<IntMatrix, SeedError> {
        let mut g = IntMatrix::zeros(self.n, self.n);
        for j in 0..self.n {
            let d = g_degree(&self.cluster[j], &self.btilde0)?;
            for i in 0..self.n {
                g.set(i, j, d[i]);
            }
        }
        Ok(g)
    }

    /// The current c-matrix: bottom n×n block of the exchange matrix.
    pub fn c_matrix(&self) -> IntMatrix {
        let mut c = IntMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                c.set(i, j, self.b.entry(self.n + i, j));
            }
        }
        c
    }

    pub fn quantization_checks(&self) -> Result<QuantizationReport, SeedError> {
        let n = self.n;
        // BᵀΛ = (I | 0)
        let prod = self.b.transpose().mul(&self.lambda_cur);
        let mut compatibility = true;
        for i in 0..n {
            for j in 0..2 * n {
                let want = if j == i { 1 } else { 0 };
                if prod.entry(i, j) != want {
                    compatibility = false;
                }
            }
        }

        let g = self.g_matrix()?;
        let gt = g.transpose();
        let mut btilde_cur = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                btilde_cur.set(i, j, self.b.entry(i, j));
            }
        }
        let br = g.mul(&btilde_cur.transpose()).mul(&gt);
        let mut lambda_block_form = true;
        for i in 0..2 * n {
            for j in 0..2 * n {
                let want = match (i < n, j < n) {
                    (true, true) => 0,
                    (true, false) => -gt.entry(i, j - n),
                    (false, true) => g.entry(i - n, j),
                    (false, false) => br.entry(i - n, j - n),
                };
                if self.lambda_cur.entry(i, j) != want {
                    lambda_block_form = false;
                }
            }
        }

        let c = self.c_matrix();
        let tropical_duality = c.mul(&gt) == IntMatrix::identity(n);
        let sign_coherence = (0..n).all(|j| {
            let col = c.col(j);
            col.iter().all(|&v| v >= 0) || col.iter().all(|&v| v <= 0)
        });

        Ok(QuantizationReport { compatibility, lambda_block_form, tropical_duality, sign_coherence })
    }
}

/// The principal multidegree: deg x_i = e_i, deg y_j = −(column j of B̃).
/// Every monomial of a cluster variable shares this degree; errors otherwise.
pub fn g_degree(x: &TorusElement, btilde: &IntMatrix) -> Result<Vec<i64>, SeedError> {
    let n = btilde.rows();
    let mut deg: Option<Vec<i64>> = None;
    for (e, _) in x.terms() {
        if e.len() != 2 * n {
            return Err(SeedError::Shape {
                expected: format!("{}", 2 * n),
                got: format!("{}", e.len()),
            });
        }
        let by = btilde.apply(&e[n..]);
        let d: Vec<i64> = (0..n).map(|i| e[i] - by[i]).collect();
        match &deg {
            None => deg = Some(d),
            Some(prev) if *prev == d => {}
            Some(_) => return Err(SeedError::NotHomogeneous),
        }
    }
    deg.ok_or(SeedError::NotHomogeneous)
}

/// Result of a breadth-first walk of the exchange graph up to unordered
/// equality of mutable clusters.
#[derive(Debug)]
pub struct ExchangeExploration {
    pub num_clusters: usize,
    /// true when the walk closed before hitting the seed cap.
    pub complete: bool,
    /// every distinct mutable cluster variable encountered, sorted by its
    /// canonical rendering.
    pub variables: Vec<TorusElement>,
}

fn cluster_key(seed: &QuantumSeed) -> Vec<String> {
    let mut key: Vec<String> =
        seed.cluster()[..seed.n()].iter().map(|v| v.to_string()).collect();
    key.sort();
    key
}

pub fn exchange_graph_bfs(
    btilde: IntMatrix,
    max_clusters: usize,
) -> Result<ExchangeExploration, SeedError> {
    let start = QuantumSeed::initial(btilde)?;
    let n = start.n();
    let mut visited: BTreeSet<Vec<String>> = BTreeSet::new();
    let mut vars: std::collections::BTreeMap<String, TorusElement> = Default::default();
    let mut queue = VecDeque::new();
    visited.insert(cluster_key(&start));
    for v in &start.cluster()[..n] {
        vars.insert(v.to_string(), v.clone());
    }
    queue.push_back(start);
    let mut complete = true;
    while let Some(seed) = queue.pop_front() {
        for k in 1..=n {
            let next = seed.mutate(k)?;
            let key = cluster_key(&next);
            if visited.contains(&key) {
                continue;
            }
            if visited.len() >= max_clusters {
                complete = false;
                continue;
            }
            visited.insert(key);
            for v in &next.cluster()[..n] {
                vars.insert(v.to_string(), v.clone());
            }
            queue.push_back(next);
        }
    }
    Ok(ExchangeExploration {
        num_clusters: visited.len(),
        complete,
        variables: vars.into_values().collect(),
    })
}
