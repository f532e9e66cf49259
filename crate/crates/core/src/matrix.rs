//! Dense exact matrices over a [`Field`], plus the subspace type and the
//! elimination-based kernels everything else uses: rank/kernel/image, affine
//! solving, spinning, Fitting decomposition, and characteristic/minimal
//! polynomials with eigenvalue extraction.
//!
//! All elimination uses first-nonzero pivot selection, so results are
//! deterministic functions of their inputs.

use crate::error::{Error, Result};
use crate::field::{embedding, Elem, Embedding, Field};
use crate::poly::{rational_roots, roots_in_field, splitting_degree, Poly};

#[derive(Clone, PartialEq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>, // row-major
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.field.elem_to_string(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        let data = vec![field.zero(); rows * cols];
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field.clone(), n, n);
        let one = field.one();
        for i in 0..n {
            m.set(i, i, one.clone());
        }
        m
    }

    pub fn scalar(field: Field, n: usize, e: &Elem) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Elem>(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Elem>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            field,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(field: &Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            field.clone(),
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn column(field: Field, entries: Vec<Elem>) -> Matrix {
        let rows = entries.len();
        Matrix {
            field,
            rows,
            cols: 1,
            data: entries,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Elem) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = e;
    }

    pub fn row_vec(&self, i: usize) -> Vec<Elem> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col_vec(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field.clone(), self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.add(a, b))
            .collect();
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.sub(a, b))
            .collect();
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> Matrix {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.neg(a)).collect(),
        }
    }

    pub fn scale(&self, e: &Elem) -> Matrix {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, e)).collect(),
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let f = &self.field;
        let mut out = Matrix::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = f.mul(a, other.get(k, j));
                    let cur = f.add(out.get(i, j), &t);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        let mut out = vec![f.zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if f.is_zero(a) || f.is_zero(&v[j]) {
                    continue;
                }
                out[i] = f.add(&out[i], &f.mul(a, &v[j]));
            }
        }
        out
    }

    pub fn trace(&self) -> Elem {
        assert_eq!(self.rows, self.cols);
        let f = &self.field;
        let mut acc = f.zero();
        for i in 0..self.rows {
            acc = f.add(&acc, self.get(i, i));
        }
        acc
    }

    pub fn pow(&self, mut e: usize) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.field.clone(), self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base);
            }
            base = base.matmul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.field, other.field);
        Matrix::from_fn(self.field.clone(), self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.field, other.field);
        Matrix::from_fn(self.field.clone(), self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        assert!(r1 <= self.rows && c1 <= self.cols && r0 <= r1 && c0 <= c1);
        Matrix::from_fn(self.field.clone(), r1 - r0, c1 - c0, |i, j| {
            self.get(r0 + i, c0 + j).clone()
        })
    }

    pub fn select_cols(&self, sel: &[usize]) -> Matrix {
        Matrix::from_fn(self.field.clone(), self.rows, sel.len(), |i, j| {
            self.get(i, sel[j]).clone()
        })
    }

    /// Kronecker product; with column-major vectorization,
    /// vec(A X B) = (B^T (x) A) vec(X).
    pub fn kron(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field);
        let f = &self.field;
        Matrix::from_fn(
            f.clone(),
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| {
                let (i1, i2) = (i / other.rows, i % other.rows);
                let (j1, j2) = (j / other.cols, j % other.cols);
                f.mul(self.get(i1, j1), other.get(i2, j2))
            },
        )
    }

    /// Column-major flattening.
    pub fn vec_cm(&self) -> Vec<Elem> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    /// Inverse of [`Matrix::vec_cm`].
    pub fn from_vec_cm(field: Field, rows: usize, cols: usize, v: &[Elem]) -> Matrix {
        assert_eq!(v.len(), rows * cols);
        Matrix::from_fn(field, rows, cols, |i, j| v[j * rows + i].clone())
    }

    pub fn map_embed(&self, emb: &Embedding) -> Matrix {
        Matrix {
            field: emb.dst().clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| emb.map(e)).collect(),
        }
    }

    /// Reduced row echelon form with pivot columns (first-nonzero pivots).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            // first nonzero entry in this column at or below `row`
            let mut pr = None;
            for i in row..m.rows {
                if !f.is_zero(m.get(i, col)) {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != row {
                for j in 0..m.cols {
                    let a = m.get(pr, j).clone();
                    let b = m.get(row, j).clone();
                    m.set(pr, j, b);
                    m.set(row, j, a);
                }
            }
            let inv = f.inv(m.get(row, col)).unwrap();
            for j in col..m.cols {
                let v = f.mul(m.get(row, j), &inv);
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row || f.is_zero(m.get(i, col)) {
                    continue;
                }
                let factor = m.get(i, col).clone();
                for j in col..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(row, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank, kernel (subspace of the column-index space) and image (subspace
    /// of the row-index space).
    pub fn rank_ker_im(&self) -> (usize, Subspace, Subspace) {
        let f = self.field.clone();
        let (r, pivots) = self.rref();
        let rank = pivots.len();
        // kernel basis: one vector per free column
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut kernel_cols: Vec<Vec<Elem>> = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(i, free));
            }
            kernel_cols.push(v);
        }
        let kernel = Subspace::from_column_vecs(f.clone(), self.cols, kernel_cols);
        let image = Subspace::from_columns(&self.select_cols(&pivots));
        (rank, kernel, image)
    }

    pub fn kernel(&self) -> Subspace {
        self.rank_ker_im().1
    }

    pub fn image(&self) -> Subspace {
        self.rank_ker_im().2
    }

    /// Solves A x = b. Returns None when b is outside the image.
    pub fn solve_affine(&self, b: &Matrix) -> Result<Option<Solution>> {
        if self.field != b.field {
            return Err(Error::FieldMismatch("solve_affine operands".into()));
        }
        if b.rows != self.rows || b.cols != 1 {
            return Err(Error::ShapeMismatch(format!(
                "solve_affine: A is {}x{}, b is {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let f = self.field.clone();
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        let nullspace = self.kernel();
        Ok(Some(Solution {
            particular: Matrix::column(f, x),
            nullspace,
        }))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field.clone(), n));
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        Some(r.submatrix(0, n, n, 2 * n))
    }

    /// Fitting decomposition: (Ker(M^n), Im(M^n)); the parts are
    /// complementary and M-invariant.
    pub fn fitting(&self) -> (Subspace, Subspace) {
        assert_eq!(self.rows, self.cols);
        let mn = self.pow(self.rows.max(1));
        let (_, ker, im) = mn.rank_ker_im();
        (ker, im)
    }

    /// Evaluates a polynomial at this matrix.
    pub fn apply_poly(&self, p: &Poly) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let f = self.field.clone();
        let mut acc = Matrix::zeros(f.clone(), self.rows, self.rows);
        for c in p.coeffs().iter().rev() {
            acc = acc.matmul(self);
            for i in 0..self.rows {
                let v = f.add(acc.get(i, i), c);
                acc.set(i, i, v);
            }
        }
        acc
    }

    /// Characteristic polynomial det(xI - M), computed via a similarity
    /// reduction to Hessenberg form and the Hessenberg recurrence.
    pub fn charpoly(&self) -> Poly {
        assert_eq!(self.rows, self.cols);
        let f = self.field.clone();
        let n = self.rows;
        if n == 0 {
            return Poly::constant(f.clone(), f.one());
        }
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let mut piv = None;
            for i in (j + 1)..n {
                if !f.is_zero(h.get(i, j)) {
                    piv = Some(i);
                    break;
                }
            }
            let Some(pi) = piv else { continue };
            if pi != j + 1 {
                for c in 0..n {
                    let a = h.get(pi, c).clone();
                    let b = h.get(j + 1, c).clone();
                    h.set(pi, c, b);
                    h.set(j + 1, c, a);
                }
                for r in 0..n {
                    let a = h.get(r, pi).clone();
                    let b = h.get(r, j + 1).clone();
                    h.set(r, pi, b);
                    h.set(r, j + 1, a);
                }
            }
            let inv = f.inv(h.get(j + 1, j)).unwrap();
            for i in (j + 2)..n {
                let m = f.mul(h.get(i, j), &inv);
                if f.is_zero(&m) {
                    continue;
                }
                for c in 0..n {
                    let v = f.sub(h.get(i, c), &f.mul(&m, h.get(j + 1, c)));
                    h.set(i, c, v);
                }
                for r in 0..n {
                    let v = f.add(h.get(r, j + 1), &f.mul(&m, h.get(r, i)));
                    h.set(r, j + 1, v);
                }
            }
        }
        // p_i = (x - h[i-1][i-1]) p_{i-1}
        //       - sum_j h[j-1][i-1] (prod_{l=j..i-1} h[l][l-1]) p_{j-1}
        let mut ps: Vec<Poly> = Vec::with_capacity(n + 1);
        ps.push(Poly::constant(f.clone(), f.one()));
        for i in 1..=n {
            let xm = Poly::linear_root(f.clone(), h.get(i - 1, i - 1));
            let mut p = xm.mul(&ps[i - 1]);
            let mut prod = f.one();
            for j in (1..i).rev() {
                prod = f.mul(&prod, h.get(j, j - 1));
                let coeff = f.mul(h.get(j - 1, i - 1), &prod);
                if f.is_zero(&coeff) {
                    continue;
                }
                p = p.sub(&ps[j - 1].mul_elem(&coeff));
            }
            ps.push(p);
        }
        ps.pop().unwrap()
    }

    /// Minimal polynomial, via per-vector Krylov relations.
    pub fn minpoly(&self) -> Poly {
        assert_eq!(self.rows, self.cols);
        let f = self.field.clone();
        let n = self.rows;
        let mut acc = Poly::constant(f.clone(), f.one());
        for s in 0..n {
            if acc.degree() == Some(n) {
                break;
            }
            let mut e = vec![f.zero(); n];
            e[s] = f.one();
            // skip vectors already annihilated by the current candidate
            let img = self.apply_poly(&acc).mul_vec(&e);
            if img.iter().all(|x| f.is_zero(x)) {
                continue;
            }
            // Krylov chain with coordinates back to powers of M
            let mut reducer: Vec<(Vec<Elem>, Vec<Elem>, usize)> = Vec::new(); // (vector, comb, pivot)
            let mut cur = e;
            let mut d = 0usize;
            let local = loop {
                let mut comb = vec![f.zero(); d + 1];
                comb[d] = f.one();
                let mut v = cur.clone();
                for (rv, rc, piv) in &reducer {
                    if f.is_zero(&v[*piv]) {
                        continue;
                    }
                    let factor = v[*piv].clone();
                    for i in 0..n {
                        v[i] = f.sub(&v[i], &f.mul(&factor, &rv[i]));
                    }
                    for (i, c) in rc.iter().enumerate() {
                        if i < comb.len() {
                            comb[i] = f.sub(&comb[i], &f.mul(&factor, c));
                        }
                    }
                }
                match v.iter().position(|x| !f.is_zero(x)) {
                    None => {
                        // relation found: sum comb_i M^i annihilates e_s
                        break Poly::new(f.clone(), comb);
                    }
                    Some(piv) => {
                        let inv = f.inv(&v[piv]).unwrap();
                        let rv: Vec<Elem> = v.iter().map(|x| f.mul(x, &inv)).collect();
                        let rc: Vec<Elem> = comb.iter().map(|x| f.mul(x, &inv)).collect();
                        reducer.push((rv, rc, piv));
                        cur = self.mul_vec(&cur);
                        d += 1;
                    }
                }
            };
            // acc = lcm(acc, local)
            let g = acc.gcd(&local);
            acc = acc.mul(&local.div_exact(&g)).monic();
        }
        acc
    }

    /// Eigenvalues with multiplicities. Over a finite field the roots are
    /// returned in the smallest extension where the characteristic polynomial
    /// splits; over Q only rational roots are found and `splits` reports
    /// whether they account for the whole degree.
    pub fn char_roots(&self) -> Result<CharRoots> {
        let f = self.field.clone();
        let cp = self.charpoly();
        if f.is_rationals() {
            let (roots, splits) = rational_roots(&cp)?;
            return Ok(CharRoots {
                field: f,
                embedding: None,
                roots,
                splits,
            });
        }
        let n = self.rows;
        let base_roots = roots_in_field(&cp)?;
        let found: usize = base_roots.iter().map(|(_, m)| m).sum();
        if found == n {
            return Ok(CharRoots {
                field: f,
                embedding: None,
                roots: base_roots,
                splits: true,
            });
        }
        let d = splitting_degree(&cp);
        let p = f.characteristic().unwrap();
        let k = f.degree().unwrap();
        let ext = Field::extension(p, k * d)?;
        let emb = embedding(&f, &ext)?;
        let cp_ext = cp.map_field(&emb);
        let roots = roots_in_field(&cp_ext)?;
        let total: usize = roots.iter().map(|(_, m)| m).sum();
        debug_assert_eq!(total, n, "characteristic polynomial must split");
        Ok(CharRoots {
            field: ext,
            embedding: Some(emb),
            roots,
            splits: true,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Matrix,
    pub nullspace: Subspace,
}

#[derive(Clone, Debug)]
pub struct CharRoots {
    /// Field containing the roots (the input field, or an extension of it).
    pub field: Field,
    /// Embedding of the input field into `field`, when an extension was needed.
    pub embedding: Option<Embedding>,
    /// (root, multiplicity), canonically sorted.
    pub roots: Vec<(Elem, usize)>,
    /// Whether the multiplicities sum to the matrix size.
    pub splits: bool,
}

/// A subspace of K^n, stored by a canonical basis matrix (columns are the
/// basis; the transposed basis is in reduced row echelon form), so equal
/// subspaces compare equal.
#[derive(Clone, PartialEq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Matrix, // ambient x dim
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} of {})", self.dim(), self.ambient)
    }
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            basis: Matrix::zeros(field.clone(), ambient, 0),
            field,
            ambient,
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace {
            basis: Matrix::identity(field.clone(), ambient),
            field,
            ambient,
        }
    }

    /// Canonicalizes the span of the given columns.
    pub fn from_columns(m: &Matrix) -> Subspace {
        let field = m.field().clone();
        let ambient = m.rows();
        let (r, pivots) = m.transpose().rref();
        let basis = r.submatrix(0, pivots.len(), 0, ambient).transpose();
        Subspace {
            field,
            ambient,
            basis,
        }
    }

    pub fn from_column_vecs(field: Field, ambient: usize, cols: Vec<Vec<Elem>>) -> Subspace {
        let n = cols.len();
        let m = Matrix::from_fn(field, ambient, n, |i, j| cols[j][i].clone());
        Subspace::from_columns(&m)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Elem>> {
        (0..self.dim()).map(|j| self.basis.col_vec(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn contains_vec(&self, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let b = Matrix::column(self.field.clone(), v.to_vec());
        matches!(self.basis.solve_affine(&b), Ok(Some(_)))
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other
            .basis_vectors()
            .iter()
            .all(|v| self.contains_vec(v))
    }

    /// Coordinates of v in this basis; None when v is outside the span.
    pub fn coordinates(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        let b = Matrix::column(self.field.clone(), v.to_vec());
        match self.basis.solve_affine(&b) {
            Ok(Some(sol)) => Some(sol.particular.col_vec(0)),
            _ => None,
        }
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::from_columns(&self.basis.hstack(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.field.clone(), self.ambient);
        }
        // kernel of [A | -B] gives pairs (u, w) with A u = B w
        let stacked = self.basis.hstack(&other.basis.neg());
        let ker = stacked.kernel();
        let mut cols = Vec::new();
        for v in ker.basis_vectors() {
            let u = &v[..self.dim()];
            cols.push(self.basis.mul_vec(u));
        }
        Subspace::from_column_vecs(self.field.clone(), self.ambient, cols)
    }

    pub fn is_invariant_under(&self, op: &Matrix) -> bool {
        assert_eq!(op.cols(), self.ambient);
        for v in self.basis_vectors() {
            if !self.contains_vec(&op.mul_vec(&v)) {
                return false;
            }
        }
        true
    }

    /// Extends the basis to a full basis of the ambient space with standard
    /// basis vectors, taken in index order. Returns the (ambient x ambient)
    /// invertible matrix [basis | extension].
    pub fn complete_basis(&self) -> Matrix {
        let f = self.field.clone();
        let mut reducer = RowReducer::new(f.clone(), self.ambient);
        for v in self.basis_vectors() {
            reducer.add(v);
        }
        let mut ext_cols: Vec<Vec<Elem>> = Vec::new();
        for i in 0..self.ambient {
            if reducer.rank() == self.ambient {
                break;
            }
            let mut e = vec![f.zero(); self.ambient];
            e[i] = f.one();
            if reducer.add(e.clone()) {
                ext_cols.push(e);
            }
        }
        let ext = Matrix::from_fn(f.clone(), self.ambient, ext_cols.len(), |r, c| {
            ext_cols[c][r].clone()
        });
        self.basis.hstack(&ext)
    }

    pub fn map_embed(&self, emb: &Embedding) -> Subspace {
        Subspace {
            field: emb.dst().clone(),
            ambient: self.ambient,
            basis: self.basis.map_embed(emb),
        }
    }
}

/// Incremental row reduction, used for spinning and rank accumulation.
pub(crate) struct RowReducer {
    field: Field,
    n: usize,
    rows: Vec<(Vec<Elem>, usize)>, // (normalized row, pivot)
}

impl RowReducer {
    pub fn new(field: Field, n: usize) -> RowReducer {
        RowReducer {
            field,
            n,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces v against the stored rows; returns the residual.
    pub fn reduce(&self, mut v: Vec<Elem>) -> Vec<Elem> {
        let f = &self.field;
        for (row, piv) in &self.rows {
            if f.is_zero(&v[*piv]) {
                continue;
            }
            let factor = v[*piv].clone();
            for i in 0..self.n {
                v[i] = f.sub(&v[i], &f.mul(&factor, &row[i]));
            }
        }
        v
    }

    /// Adds v to the span; returns true when the rank grew.
    pub fn add(&mut self, v: Vec<Elem>) -> bool {
        let f = self.field.clone();
        let v = self.reduce(v);
        match v.iter().position(|x| !f.is_zero(x)) {
            None => false,
            Some(piv) => {
                let inv = f.inv(&v[piv]).unwrap();
                let row: Vec<Elem> = v.iter().map(|x| f.mul(x, &inv)).collect();
                self.rows.push((row, piv));
                true
            }
        }
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        let r = self.reduce(v.to_vec());
        r.iter().all(|x| self.field.is_zero(x))
    }

    pub fn row_vectors(&self) -> Vec<Vec<Elem>> {
        self.rows.iter().map(|(r, _)| r.clone()).collect()
    }
}

/// Smallest subspace containing `vectors` and invariant under every operator.
pub fn spin(field: &Field, ambient: usize, vectors: &[Vec<Elem>], operators: &[&Matrix]) -> Subspace {
    let mut reducer = RowReducer::new(field.clone(), ambient);
    let mut work: Vec<Vec<Elem>> = Vec::new();
    for v in vectors {
        assert_eq!(v.len(), ambient);
        if reducer.add(v.clone()) {
            work.push(v.clone());
        }
    }
    while let Some(v) = work.pop() {
        if reducer.rank() == ambient {
            break;
        }
        for op in operators {
            let w = op.mul_vec(&v);
            if reducer.add(w.clone()) {
                work.push(w);
            }
        }
    }
    Subspace::from_column_vecs(field.clone(), ambient, reducer.row_vectors())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn rank_ker_im_identity_gf5() {
        let f = gf(5);
        let m = Matrix::identity(f, 2);
        let (rank, ker, im) = m.rank_ker_im();
        assert_eq!(rank, 2);
        assert_eq!(ker.dim(), 0);
        assert_eq!(im.dim(), 2);
    }

    #[test]
    fn rank_ker_im_zero_3x2() {
        let f = gf(5);
        let m = Matrix::zeros(f, 3, 2);
        let (rank, ker, im) = m.rank_ker_im();
        assert_eq!(rank, 0);
        assert_eq!(ker.dim(), 2);
        assert_eq!(im.dim(), 0);
    }

    #[test]
    fn rank_ker_im_jordan_block_over_q() {
        let f = Field::rationals();
        let m = Matrix::from_i64(&f, &[&[0, 1], &[0, 0]]);
        let (rank, ker, im) = m.rank_ker_im();
        assert_eq!(rank, 1);
        // kernel and image are both the first coordinate line
        let e0 = vec![f.one(), f.zero()];
        assert!(ker.contains_vec(&e0));
        assert_eq!(ker.dim(), 1);
        assert!(im.contains_vec(&e0));
        assert_eq!(im.dim(), 1);
    }

    #[test]
    fn solve_identity_gf7() {
        let f = gf(7);
        let a = Matrix::identity(f.clone(), 2);
        let b = Matrix::column(f.clone(), vec![f.from_i64(1), f.from_i64(2)]);
        let sol = a.solve_affine(&b).unwrap().unwrap();
        assert_eq!(sol.particular.col_vec(0), vec![f.from_i64(1), f.from_i64(2)]);
        assert_eq!(sol.nullspace.dim(), 0);
    }

    #[test]
    fn solve_zero_map_misses_target() {
        let f = gf(7);
        let a = Matrix::zeros(f.clone(), 2, 2);
        let b = Matrix::column(f.clone(), vec![f.one(), f.zero()]);
        assert!(a.solve_affine(&b).unwrap().is_none());
    }

    #[test]
    fn solve_underdetermined_gf5() {
        let f = gf(5);
        let a = Matrix::from_i64(&f, &[&[1, 1], &[0, 0]]);
        let b = Matrix::column(f.clone(), vec![f.from_i64(3), f.zero()]);
        let sol = a.solve_affine(&b).unwrap().unwrap();
        assert_eq!(
            sol.particular.col_vec(0),
            vec![f.from_i64(3), f.from_i64(0)]
        );
        assert_eq!(sol.nullspace.dim(), 1);
        assert!(sol
            .nullspace
            .contains_vec(&[f.from_i64(4), f.from_i64(1)]));
    }

    #[test]
    fn char_roots_diag_gf7() {
        let f = gf(7);
        let m = Matrix::from_i64(&f, &[&[2, 0], &[0, 3]]);
        let cr = m.char_roots().unwrap();
        assert!(cr.splits);
        assert_eq!(cr.field, f);
        assert_eq!(cr.roots, vec![(f.from_i64(2), 1), (f.from_i64(3), 1)]);
    }

    #[test]
    fn char_roots_companion_x2_plus_1_gf3() {
        let f = gf(3);
        // companion matrix of x^2 + 1
        let m = Matrix::from_i64(&f, &[&[0, -1], &[1, 0]]);
        let cp = m.charpoly();
        assert_eq!(
            cp.coeffs(),
            &[f.from_i64(1), f.from_i64(0), f.from_i64(1)]
        );
        let cr = m.char_roots().unwrap();
        assert!(cr.splits);
        assert_eq!(cr.field.degree(), Some(2));
        assert_eq!(cr.roots.len(), 2);
    }

    #[test]
    fn char_roots_nilpotent() {
        let f = gf(5);
        let m = Matrix::zeros(f.clone(), 2, 2);
        let cr = m.char_roots().unwrap();
        assert_eq!(cr.roots, vec![(f.zero(), 2)]);
    }

    #[test]
    fn char_roots_rational_no_split() {
        let f = Field::rationals();
        let m = Matrix::from_i64(&f, &[&[0, -1], &[1, 0]]);
        let cr = m.char_roots().unwrap();
        assert!(!cr.splits);
        assert!(cr.roots.is_empty());
    }

    #[test]
    fn spin_examples() {
        let f = gf(5);
        let id = Matrix::identity(f.clone(), 2);
        let j2 = Matrix::from_i64(&f, &[&[0, 1], &[0, 0]]);
        let e0 = vec![f.one(), f.zero()];
        let e1 = vec![f.zero(), f.one()];
        let s = spin(&f, 2, &[e0.clone()], &[&id]);
        assert_eq!(s.dim(), 1);
        assert!(s.contains_vec(&e0));
        // J2 e0 = 0, so the spin of e0 stays one-dimensional
        let s = spin(&f, 2, &[e0.clone()], &[&j2]);
        assert_eq!(s.dim(), 1);
        // J2 e1 = e0, so the spin of e1 is everything
        let s = spin(&f, 2, &[e1], &[&j2]);
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn spin_is_idempotent_and_invariant() {
        let f = gf(7);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let op = Matrix::from_fn(f.clone(), 4, 4, |_, _| f.random_elem(&mut rng));
            let v: Vec<Elem> = (0..4).map(|_| f.random_elem(&mut rng)).collect();
            let s = spin(&f, 4, &[v], &[&op]);
            assert!(s.is_invariant_under(&op));
            let again = spin(&f, 4, &s.basis_vectors(), &[&op]);
            assert_eq!(s, again);
        }
    }

    #[test]
    fn fitting_examples() {
        let f = gf(5);
        let inv = Matrix::from_i64(&f, &[&[1, 1], &[0, 1]]);
        let (k, i) = inv.fitting();
        assert_eq!(k.dim(), 0);
        assert_eq!(i.dim(), 2);

        let nil = Matrix::from_i64(&f, &[&[0, 1], &[0, 0]]);
        let (k, i) = nil.fitting();
        assert_eq!(k.dim(), 2);
        assert_eq!(i.dim(), 0);

        let d = Matrix::from_i64(&f, &[&[0, 0], &[0, 1]]);
        let (k, i) = d.fitting();
        assert_eq!(k.dim(), 1);
        assert_eq!(i.dim(), 1);
        assert!(k.contains_vec(&[f.one(), f.zero()]));
        assert!(i.contains_vec(&[f.zero(), f.one()]));
    }

    #[test]
    fn fitting_parts_complementary_on_random() {
        let f = gf(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let m = Matrix::from_fn(f.clone(), 5, 5, |_, _| f.random_elem(&mut rng));
            let (k, i) = m.fitting();
            assert_eq!(k.dim() + i.dim(), 5);
            assert_eq!(k.intersect(&i).dim(), 0);
            assert!(k.is_invariant_under(&m));
            assert!(i.is_invariant_under(&m));
        }
    }

    #[test]
    fn rank_transpose_and_nullity_on_random() {
        for field in [gf(2), gf(7), Field::extension(3, 2).unwrap()] {
            let mut rng = ChaCha8Rng::seed_from_u64(23);
            for _ in 0..25 {
                let m = Matrix::from_fn(field.clone(), 4, 6, |_, _| field.random_elem(&mut rng));
                let (rank, ker, im) = m.rank_ker_im();
                assert_eq!(rank + ker.dim(), 6);
                assert_eq!(im.dim(), rank);
                assert_eq!(m.transpose().rank(), rank);
                for v in ker.basis_vectors() {
                    assert!(m.mul_vec(&v).iter().all(|x| field.is_zero(x)));
                }
            }
        }
    }

    #[test]
    fn solve_affine_full_solution_set() {
        let f = gf(7);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..25 {
            let a = Matrix::from_fn(f.clone(), 3, 4, |_, _| f.random_elem(&mut rng));
            let x: Vec<Elem> = (0..4).map(|_| f.random_elem(&mut rng)).collect();
            let b = Matrix::column(f.clone(), a.mul_vec(&x));
            let sol = a.solve_affine(&b).unwrap().unwrap();
            let px = sol.particular.col_vec(0);
            assert_eq!(a.mul_vec(&px), b.col_vec(0));
            // solvable iff rank([A|b]) = rank(A)
            assert_eq!(a.hstack(&b).rank(), a.rank());
        }
    }

    #[test]
    fn charpoly_multiplicities_sum_to_n() {
        let f = Field::extension(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..10 {
            let m = Matrix::from_fn(f.clone(), 4, 4, |_, _| f.random_elem(&mut rng));
            let cr = m.char_roots().unwrap();
            assert!(cr.splits);
            let total: usize = cr.roots.iter().map(|(_, k)| k).sum();
            assert_eq!(total, 4);
            // each root is genuinely an eigenvalue in the extension
            let emb = cr
                .embedding
                .clone()
                .unwrap_or_else(|| Embedding::identity(&f));
            let me = m.map_embed(&emb);
            for (r, _) in &cr.roots {
                let shifted = me.sub(&Matrix::scalar(cr.field.clone(), 4, r));
                assert!(shifted.rank() < 4);
            }
        }
    }

    #[test]
    fn minpoly_divides_charpoly_and_annihilates() {
        let f = gf(5);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let m = Matrix::from_fn(f.clone(), 4, 4, |_, _| f.random_elem(&mut rng));
            let mp = m.minpoly();
            let cp = m.charpoly();
            assert!(cp.rem(&mp).is_zero());
            assert!(m.apply_poly(&mp).is_zero());
        }
    }

    #[test]
    fn complete_basis_is_invertible() {
        let f = gf(5);
        let m = Matrix::from_i64(&f, &[&[1, 0], &[2, 0], &[0, 0]]);
        let s = Subspace::from_columns(&m);
        assert_eq!(s.dim(), 1);
        let full = s.complete_basis();
        assert_eq!(full.cols(), 3);
        assert!(full.inverse().is_some());
    }

    #[test]
    fn subspace_canonical_equality() {
        let f = gf(7);
        let a = Matrix::from_i64(&f, &[&[1, 1], &[0, 1], &[0, 0]]);
        let b = Matrix::from_i64(&f, &[&[2, 3], &[1, 1], &[0, 0]]);
        // both span the plane x3 = 0
        assert_eq!(Subspace::from_columns(&a), Subspace::from_columns(&b));
    }
}
