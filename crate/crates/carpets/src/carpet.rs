//! Carpet matrices: square matrices over GF(p^k) generated by the border
//! recurrence
//!
//! ```text
//! a(0, j) = a(i, 0) = 1
//! a(i, j) = a(i-1, j) + m * a(i-1, j-1) + a(i, j-1)
//! ```
//!
//! at side `p^d`.  Three independent construction routes are provided and
//! must agree entry for entry: the recurrence itself, a Kronecker product of
//! Frobenius twists of the fundamental `p x p` block, and a per-entry digit
//! product that needs no matrix at all.

use std::env;
use std::ops::Deref;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// Largest number of entries a dense matrix may hold unless overridden by the
/// `CARPETS_MAX_DENSE_ENTRIES` environment variable.
pub const MAX_DENSE_ENTRIES: usize = 1 << 26;

/// Streaming and per-entry access cap on the depth; side lengths stay within
/// `p^12` so index digit arrays stay small.
pub const MAX_DEPTH: u32 = 12;

pub(crate) fn dense_entry_limit() -> usize {
    static LIMIT: OnceLock<usize> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        env::var("CARPETS_MAX_DENSE_ENTRIES")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(MAX_DENSE_ENTRIES)
    })
}

pub(crate) fn guard_dense(entries: u128, what: &str) -> Result<()> {
    let limit = dense_entry_limit() as u128;
    if entries > limit {
        return Err(Error::capacity(format!(
            "{what} needs {entries} dense entries (limit {limit}); \
             use entry_at or stream_rows, or raise CARPETS_MAX_DENSE_ENTRIES"
        )));
    }
    Ok(())
}

/// Parameters of one carpet: the field, the recurrence multiplier `m` and the
/// depth `d` (the matrix has side `p^d`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarpetParams {
    field: FieldSpec,
    m: FieldElement,
    depth: u32,
}

impl CarpetParams {
    pub fn new(field: FieldSpec, m: FieldElement, depth: u32) -> Result<Self> {
        field.add(&m, &field.zero())?;
        if depth < 1 || depth > MAX_DEPTH {
            return Err(Error::usage(format!(
                "depth {depth} out of range 1..={MAX_DEPTH}"
            )));
        }
        let mut side = 1u64;
        for _ in 0..depth {
            side = side.checked_mul(field.p()).ok_or_else(|| {
                Error::capacity(format!("side {}^{depth} does not fit in 64 bits", field.p()))
            })?;
        }
        Ok(CarpetParams { field, m, depth })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn m(&self) -> &FieldElement {
        &self.m
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Side length `p^d`.
    pub fn side(&self) -> u64 {
        let mut side = 1u64;
        for _ in 0..self.depth {
            side *= self.field.p();
        }
        side
    }

}

/// Dense matrix over a finite field.  Entries are stored as integer
/// encodings, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::usage(format!(
                "matrix data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        if data.iter().any(|&e| e >= field.order()) {
            return Err(Error::usage("matrix entry encoding out of field range"));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn encoding(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElement {
        self.field
            .decode(self.encoding(i, j))
            .expect("stored encodings are valid")
    }

    pub fn encodings(&self) -> &[u64] {
        &self.data
    }

    /// Kronecker product: block `(i, j)` of the result is `a(i, j) * B`.
    pub fn tensor(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::usage("tensor factors lie in different fields"));
        }
        let entries = (self.rows as u128 * other.rows as u128)
            * (self.cols as u128 * other.cols as u128);
        guard_dense(entries, "tensor product")?;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![0u64; rows * cols];
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let scale = self.encoding(ia, ja);
                if scale == 0 {
                    continue;
                }
                for ib in 0..other.rows {
                    let out_row = ia * other.rows + ib;
                    for jb in 0..other.cols {
                        let out_col = ja * other.cols + jb;
                        data[out_row * cols + out_col] =
                            self.field.mul_enc(scale, other.encoding(ib, jb));
                    }
                }
            }
        }
        Ok(Matrix { field: self.field.clone(), rows, cols, data })
    }

    /// Frobenius automorphism applied to every entry.
    pub fn frobenius_map(&self) -> Matrix {
        let data = self.data.iter().map(|&e| self.field.frobenius_enc(e)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Columns reversed.
    pub fn mirrored(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                data.push(self.encoding(i, self.cols - 1 - j));
            }
        }
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// 0/1 shadow of a square matrix: 1 where the entry is nonzero.
    pub fn support(&self) -> Result<SupportMatrix> {
        if self.rows != self.cols {
            return Err(Error::usage("support is defined for square matrices"));
        }
        let bits = self.data.iter().map(|&e| u8::from(e != 0)).collect();
        Ok(SupportMatrix { side: self.rows, bits })
    }
}

/// A carpet matrix: the dense matrix together with the parameters that
/// produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarpetMatrix {
    params: CarpetParams,
    matrix: Matrix,
}

impl CarpetMatrix {
    pub(crate) fn from_parts(params: CarpetParams, matrix: Matrix) -> Self {
        CarpetMatrix { params, matrix }
    }

    pub fn params(&self) -> &CarpetParams {
        &self.params
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn side(&self) -> usize {
        self.matrix.rows()
    }
}

impl Deref for CarpetMatrix {
    type Target = Matrix;

    fn deref(&self) -> &Matrix {
        &self.matrix
    }
}

/// Dense 0/1 matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMatrix {
    side: usize,
    bits: Vec<u8>,
}

impl SupportMatrix {
    pub fn new(side: usize, bits: Vec<u8>) -> Result<Self> {
        if bits.len() != side * side || bits.iter().any(|&b| b > 1) {
            return Err(Error::usage("support bits must be a side*side 0/1 array"));
        }
        Ok(SupportMatrix { side, bits })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.side + j] == 1
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn ones_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Top-left `side x side` corner.
    pub fn corner(&self, side: usize) -> Result<SupportMatrix> {
        if side > self.side {
            return Err(Error::usage("corner larger than the matrix"));
        }
        let mut bits = Vec::with_capacity(side * side);
        for i in 0..side {
            bits.extend_from_slice(&self.bits[i * self.side..i * self.side + side]);
        }
        Ok(SupportMatrix { side, bits })
    }
}

/// Generates the carpet densely by running the recurrence.
pub fn generate_recurrence(params: &CarpetParams) -> Result<CarpetMatrix> {
    let side_u64 = params.side();
    guard_dense(side_u64 as u128 * side_u64 as u128, "carpet matrix")?;
    let side = side_u64 as usize;
    let field = params.field();
    let m_enc = params.m().encode();
    let mut data = vec![0u64; side * side];
    for j in 0..side {
        data[j] = 1;
    }
    for i in 1..side {
        data[i * side] = 1;
        for j in 1..side {
            let north = data[(i - 1) * side + j];
            let northwest = data[(i - 1) * side + j - 1];
            let west = data[i * side + j - 1];
            let mixed = field.mul_enc(m_enc, northwest);
            data[i * side + j] = field.add_enc(field.add_enc(north, mixed), west);
        }
    }
    let matrix = Matrix { field: field.clone(), rows: side, cols: side, data };
    Ok(CarpetMatrix { params: params.clone(), matrix })
}

/// Closed form of the recurrence:
/// `f(n, k) = sum over a of m^a * C(n, a) * C(n+k-a, k-a)` with binomial
/// coefficients taken mod p by Lucas digit products.
pub fn closed_form_f(field: &FieldSpec, m: &FieldElement, n: u64, k: u64) -> Result<FieldElement> {
    field.add(m, &field.zero())?;
    n.checked_add(k)
        .ok_or_else(|| Error::usage("indices too large for the closed form"))?;
    let lucas = LucasTable::new(field.p());
    let mut acc = field.zero();
    let mut m_power = field.one();
    for a in 0..=n.min(k) {
        if a > 0 {
            m_power = field.mul(&m_power, m)?;
        }
        let binom = lucas.binomial(n, a).and_then(|x| {
            lucas.binomial(n + k - a, k - a).map(|y| mod_mul(x, y, field.p()))
        });
        if let Some(b) = binom {
            if b != 0 {
                let term = field.mul(&m_power, &field.from_residue(b))?;
                acc = field.add(&acc, &term)?;
            }
        }
    }
    Ok(acc)
}

/// Binomial coefficients mod a prime via Lucas' digit products.
pub(crate) struct LucasTable {
    p: u64,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

impl LucasTable {
    pub(crate) fn new(p: u64) -> Self {
        let n = p as usize;
        let mut fact = vec![1u64; n];
        for i in 1..n {
            fact[i] = mod_mul(fact[i - 1], i as u64, p);
        }
        let mut inv_fact = vec![1u64; n];
        if n > 1 {
            inv_fact[n - 1] = crate::field::pow_residue(fact[n - 1], p - 2, p);
            for i in (1..n).rev() {
                inv_fact[i - 1] = mod_mul(inv_fact[i], i as u64, p);
            }
        }
        LucasTable { p, fact, inv_fact }
    }

    /// `C(n, k) mod p`, or `None` when it vanishes.
    pub(crate) fn binomial(&self, mut n: u64, mut k: u64) -> Option<u64> {
        if k > n {
            return None;
        }
        let mut out = 1u64;
        while n > 0 || k > 0 {
            let (nd, kd) = (n % self.p, k % self.p);
            if kd > nd {
                return None;
            }
            let digit = mod_mul(
                self.fact[nd as usize],
                mod_mul(self.inv_fact[kd as usize], self.inv_fact[(nd - kd) as usize], self.p),
                self.p,
            );
            out = mod_mul(out, digit, self.p);
            n /= self.p;
            k /= self.p;
        }
        Some(out)
    }
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Last row of the fundamental block: `(1, -m, (-m)^2, ..., (-m)^(p-1))`.
pub fn last_row(field: &FieldSpec, m: &FieldElement) -> Result<Vec<FieldElement>> {
    field.add(m, &field.zero())?;
    let p = usize::try_from(field.p())
        .map_err(|_| Error::capacity("characteristic too large to materialize a row"))?;
    let neg_m = field.neg(m)?;
    let mut out = Vec::with_capacity(p);
    let mut cur = field.one();
    for i in 0..p {
        if i > 0 {
            cur = field.mul(&cur, &neg_m)?;
        }
        out.push(cur.clone());
    }
    Ok(out)
}

/// The fundamental `p x p` block `F(p, m)`.
pub fn fundamental_block(field: &FieldSpec, m: &FieldElement) -> Result<CarpetMatrix> {
    let params = CarpetParams::new(field.clone(), m.clone(), 1)?;
    generate_recurrence(&params)
}

/// Builds the carpet as the left-associated Kronecker product of Frobenius
/// twists of the fundamental block, highest twist leftmost.
pub fn tensor_construction(params: &CarpetParams) -> Result<CarpetMatrix> {
    let side = params.side() as u128;
    guard_dense(side * side, "carpet matrix")?;
    let base = fundamental_block(params.field(), params.m())?;
    let d = params.depth() as usize;
    let mut twists = Vec::with_capacity(d);
    twists.push(base.matrix().clone());
    for t in 1..d {
        twists.push(twists[t - 1].frobenius_map());
    }
    let mut acc = twists[d - 1].clone();
    for t in (0..d - 1).rev() {
        acc = acc.tensor(&twists[t])?;
    }
    Ok(CarpetMatrix { params: params.clone(), matrix: acc })
}

/// Random-access and streaming view of a carpet without materializing it.
///
/// After an `O(p^2 * min(d, k))` precomputation, each entry costs `O(d)`
/// field multiplications: with `i = sum i_t p^t` and `j = sum j_t p^t`,
/// the entry is the product over `t` of the `(i_t, j_t)` entry of the `t`-th
/// Frobenius twist of the fundamental block.
pub struct CarpetOracle {
    params: CarpetParams,
    side: u64,
    p: u64,
    blocks: Vec<Vec<u64>>,
}

impl CarpetOracle {
    pub fn new(params: &CarpetParams) -> Result<Self> {
        let base = fundamental_block(params.field(), params.m())?;
        let distinct = (params.depth() as usize).min(params.field().k());
        let mut blocks = Vec::with_capacity(distinct);
        blocks.push(base.matrix().encodings().to_vec());
        for t in 1..distinct {
            let prev = &blocks[t - 1];
            let next = prev.iter().map(|&e| params.field().frobenius_enc(e)).collect();
            blocks.push(next);
        }
        Ok(CarpetOracle {
            params: params.clone(),
            side: params.side(),
            p: params.field().p(),
            blocks,
        })
    }

    pub fn params(&self) -> &CarpetParams {
        &self.params
    }

    pub fn side(&self) -> u64 {
        self.side
    }

    pub fn entry_encoding(&self, i: u64, j: u64) -> Result<u64> {
        if i >= self.side || j >= self.side {
            return Err(Error::usage(format!(
                "index ({i}, {j}) out of range for side {}",
                self.side
            )));
        }
        let p = self.p as usize;
        let field = self.params.field();
        let mut acc = 1u64;
        let (mut i, mut j) = (i, j);
        for t in 0..self.params.depth() as usize {
            let (id, jd) = ((i % self.p) as usize, (j % self.p) as usize);
            let block = &self.blocks[t % self.blocks.len()];
            acc = field.mul_enc(acc, block[id * p + jd]);
            if acc == 0 {
                return Ok(0);
            }
            i /= self.p;
            j /= self.p;
        }
        Ok(acc)
    }

    pub fn entry_at(&self, i: u64, j: u64) -> Result<FieldElement> {
        let enc = self.entry_encoding(i, j)?;
        self.params.field().decode(enc)
    }

    /// Iterator over the rows of the carpet, in order, each row a vector of
    /// entry encodings.  Working memory is one row.
    pub fn rows(&self) -> RowStream<'_> {
        RowStream { oracle: self, next_row: 0 }
    }

    fn row(&self, i: u64) -> Vec<u64> {
        let p = self.p as usize;
        let field = self.params.field();
        let d = self.params.depth() as usize;
        let mut digits = Vec::with_capacity(d);
        let mut rest = i;
        for _ in 0..d {
            digits.push((rest % self.p) as usize);
            rest /= self.p;
        }
        // Kronecker product of the block rows, highest digit leftmost.
        let mut acc = vec![1u64];
        for t in (0..d).rev() {
            let block = &self.blocks[t % self.blocks.len()];
            let part = &block[digits[t] * p..(digits[t] + 1) * p];
            let mut next = Vec::with_capacity(acc.len() * p);
            for &a in &acc {
                if a == 0 {
                    next.extend(std::iter::repeat(0).take(p));
                } else if a == 1 {
                    next.extend_from_slice(part);
                } else {
                    next.extend(part.iter().map(|&b| field.mul_enc(a, b)));
                }
            }
            acc = next;
        }
        acc
    }
}

/// See [`CarpetOracle::rows`].
pub struct RowStream<'a> {
    oracle: &'a CarpetOracle,
    next_row: u64,
}

impl Iterator for RowStream<'_> {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.next_row >= self.oracle.side {
            return None;
        }
        let row = self.oracle.row(self.next_row);
        self.next_row += 1;
        Some(row)
    }
}

/// Divides row `i` of a fundamental block by `(-m)^i`.  Defined for depth-1
/// carpets with `m` nonzero.
pub fn row_rescale(block: &CarpetMatrix) -> Result<Matrix> {
    if block.params().depth() != 1 {
        return Err(Error::domain("row rescaling is defined on the fundamental block"));
    }
    let field = block.params().field();
    let m = block.params().m();
    if m.is_zero() {
        return Err(Error::domain("row rescaling requires m to be nonzero"));
    }
    let inv_neg_m = field.inv(&field.neg(m)?)?.encode();
    let side = block.side();
    let mut data = Vec::with_capacity(side * side);
    let mut scale = 1u64;
    for i in 0..side {
        if i > 0 {
            scale = field.mul_enc(scale, inv_neg_m);
        }
        for j in 0..side {
            data.push(field.mul_enc(scale, block.encoding(i, j)));
        }
    }
    Matrix::new(field.clone(), side, side, data)
}

/// Writes a carpet in the plain text format: a header line
/// `p k c0,...,ck m d`, then `p^d` lines of space-separated entry encodings.
pub fn format_matrix_text(carpet: &CarpetMatrix) -> String {
    let mut out = header_line(carpet.params());
    for i in 0..carpet.side() {
        push_row_line(&mut out, (0..carpet.side()).map(|j| carpet.encoding(i, j)));
    }
    out
}

/// Same text format, produced from the row stream so that only one row is
/// held in memory while computing.  The returned string is still the whole
/// matrix, so the dense capacity guard applies.
pub fn format_matrix_text_streaming(params: &CarpetParams) -> Result<String> {
    let side = params.side();
    guard_dense(side as u128 * side as u128, "matrix text")?;
    let oracle = CarpetOracle::new(params)?;
    let mut out = header_line(params);
    for row in oracle.rows() {
        push_row_line(&mut out, row.into_iter());
    }
    Ok(out)
}

fn header_line(params: &CarpetParams) -> String {
    let field = params.field();
    let coeffs: Vec<String> = field.modulus().iter().map(|c| c.to_string()).collect();
    format!(
        "{} {} {} {} {}\n",
        field.p(),
        field.k(),
        coeffs.join(","),
        params.m().encode(),
        params.depth()
    )
}

fn push_row_line(out: &mut String, row: impl Iterator<Item = u64>) {
    let mut first = true;
    for e in row {
        if !first {
            out.push(' ');
        }
        out.push_str(&e.to_string());
        first = false;
    }
    out.push('\n');
}

/// Parses the text format written by [`format_matrix_text`].
pub fn parse_matrix_text(text: &str) -> Result<CarpetMatrix> {
    let bad = |what: &str| Error::usage(format!("matrix text: {what}"));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("missing header line"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 5 {
        return Err(bad("header must be `p k modulus m d`"));
    }
    let p: u64 = tokens[0].parse().map_err(|_| bad("p must be an integer"))?;
    let k: usize = tokens[1].parse().map_err(|_| bad("k must be an integer"))?;
    let modulus: std::result::Result<Vec<u64>, _> =
        tokens[2].split(',').map(|c| c.parse()).collect();
    let modulus = modulus.map_err(|_| bad("modulus coefficients must be integers"))?;
    let m_enc: u64 = tokens[3].parse().map_err(|_| bad("m must be an integer"))?;
    let depth: u32 = tokens[4].parse().map_err(|_| bad("d must be an integer"))?;
    let field = FieldSpec::new(p, k, Some(modulus))?;
    let m = field.decode(m_enc)?;
    let params = CarpetParams::new(field.clone(), m, depth)?;
    let side_u64 = params.side();
    guard_dense(side_u64 as u128 * side_u64 as u128, "carpet matrix")?;
    let side = side_u64 as usize;
    let mut data = Vec::with_capacity(side * side);
    for i in 0..side {
        let line = lines.next().ok_or_else(|| bad(&format!("missing row {i}")))?;
        let start = data.len();
        for tok in line.split_whitespace() {
            let e: u64 = tok.parse().map_err(|_| bad("entries must be integers"))?;
            data.push(e);
        }
        if data.len() - start != side {
            return Err(bad(&format!("row {i} must have {side} entries")));
        }
    }
    if lines.next().is_some() {
        return Err(bad("trailing content after the last row"));
    }
    let matrix = Matrix::new(field, side, side, data)?;
    Ok(CarpetMatrix { params, matrix })
}
