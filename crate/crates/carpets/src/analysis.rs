//! Zero structure and symmetry analysis of fundamental blocks, plus the
//! exact integer sequences tied to them.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::carpet::{fundamental_block, SupportMatrix};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// Isometries of the square grid, acting on index pairs of a side-n matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Isometry {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    FlipMainDiag,
    FlipAntiDiag,
    FlipHorizontal,
    FlipVertical,
}

impl Isometry {
    pub const ALL: [Isometry; 8] = [
        Isometry::Identity,
        Isometry::Rot90,
        Isometry::Rot180,
        Isometry::Rot270,
        Isometry::FlipMainDiag,
        Isometry::FlipAntiDiag,
        Isometry::FlipHorizontal,
        Isometry::FlipVertical,
    ];

    /// Image of cell `(i, j)` in a matrix of side `n + 1` (n = side - 1).
    pub fn apply(self, i: usize, j: usize, n: usize) -> (usize, usize) {
        match self {
            Isometry::Identity => (i, j),
            Isometry::Rot90 => (j, n - i),
            Isometry::Rot180 => (n - i, n - j),
            Isometry::Rot270 => (n - j, i),
            Isometry::FlipMainDiag => (j, i),
            Isometry::FlipAntiDiag => (n - j, n - i),
            Isometry::FlipHorizontal => (n - i, j),
            Isometry::FlipVertical => (i, n - j),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Isometry::Identity => "identity",
            Isometry::Rot90 => "rot90",
            Isometry::Rot180 => "rot180",
            Isometry::Rot270 => "rot270",
            Isometry::FlipMainDiag => "flip_main_diag",
            Isometry::FlipAntiDiag => "flip_anti_diag",
            Isometry::FlipHorizontal => "flip_horizontal",
            Isometry::FlipVertical => "flip_vertical",
        }
    }

    /// Composition `self after other`, recovered from the action on a probe
    /// grid large enough to separate all eight isometries.
    pub fn compose(self, other: Isometry) -> Isometry {
        let n = 3;
        let probes = [(0usize, 1usize), (1, 0), (1, 2)];
        'candidates: for cand in Isometry::ALL {
            for &(i, j) in &probes {
                let (oi, oj) = other.apply(i, j, n);
                if cand.apply(i, j, n) != self.apply(oi, oj, n) {
                    continue 'candidates;
                }
            }
            return cand;
        }
        unreachable!("isometry composition is closed");
    }
}

/// The four named symmetry classes of carpet supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SymmetryLabel {
    #[serde(rename = "PASCAL_S2")]
    PascalS2,
    #[serde(rename = "FULL_SQUARE_D8")]
    FullSquareD8,
    #[serde(rename = "CROSS_D8")]
    CrossD8,
    #[serde(rename = "KLEIN_K4")]
    KleinK4,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryClass {
    pub label: SymmetryLabel,
    #[serde(rename = "isometries", serialize_with = "serialize_isometries")]
    pub subgroup: Vec<Isometry>,
}

fn serialize_isometries<S: serde::Serializer>(
    v: &[Isometry],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|i| i.name()))
}

/// All grid isometries fixing the given support pointwise.
pub fn symmetry_subgroup(support: &SupportMatrix) -> Vec<Isometry> {
    let side = support.side();
    let n = side - 1;
    Isometry::ALL
        .into_iter()
        .filter(|iso| {
            (0..side).all(|i| {
                (0..side).all(|j| {
                    let (oi, oj) = iso.apply(i, j, n);
                    support.get(i, j) == support.get(oi, oj)
                })
            })
        })
        .collect()
}

fn subgroup_for(label: SymmetryLabel) -> Vec<Isometry> {
    match label {
        SymmetryLabel::PascalS2 => vec![Isometry::Identity, Isometry::FlipMainDiag],
        SymmetryLabel::FullSquareD8 | SymmetryLabel::CrossD8 => Isometry::ALL.to_vec(),
        SymmetryLabel::KleinK4 => vec![
            Isometry::Identity,
            Isometry::Rot180,
            Isometry::FlipMainDiag,
            Isometry::FlipAntiDiag,
        ],
    }
}

/// Symmetry class of the fundamental block support for `m` in the prime
/// subfield: `m = 0` keeps only the main-diagonal flip, `m = -1` (all-ones
/// block) and `m = 1` have the full dihedral group, every other `m` has
/// exactly the Klein four-group of the two diagonal flips.
pub fn classify_symmetry(field: &FieldSpec, m: &FieldElement) -> Result<SymmetryClass> {
    let r = prime_subfield_residue(field, m)?;
    let p = field.p();
    let label = if r == 0 {
        SymmetryLabel::PascalS2
    } else if r == p - 1 {
        SymmetryLabel::FullSquareD8
    } else if r == 1 {
        SymmetryLabel::CrossD8
    } else {
        SymmetryLabel::KleinK4
    };
    Ok(SymmetryClass { label, subgroup: subgroup_for(label) })
}

fn prime_subfield_residue(field: &FieldSpec, m: &FieldElement) -> Result<u64> {
    field.add(m, &field.zero())?;
    if !m.in_prime_subfield() {
        return Err(Error::domain(format!(
            "m = {} lies outside the prime subfield",
            m.encode()
        )));
    }
    Ok(m.coeffs()[0])
}

/// Column index of the unique zero in row 1 of the fundamental block:
/// `k = -(m + 1)^(-1)` in GF(p).  `None` when `m = -1` (row 1 has no zero);
/// requires `m` in the prime subfield.
pub fn first_row_zero_index(field: &FieldSpec, m: &FieldElement) -> Result<Option<u64>> {
    let r = prime_subfield_residue(field, m)?;
    let p = field.p();
    if r == p - 1 {
        return Ok(None);
    }
    let prime = FieldSpec::prime(p)?;
    let m_plus_one = prime.decode((r + 1) % p)?;
    let k = prime.neg(&prime.inv(&m_plus_one)?)?;
    Ok(Some(k.encode()))
}

/// Whether the fundamental block contains a zero entry.
///
/// Fast path: a nonzero `m` of degree above `(p-1)/2` over the prime
/// subfield admits no zeros.  Otherwise rows are generated one at a time and
/// only rows `1..=(p-1)/2` need scanning, because the zero set of a block
/// with zeros always meets them.
pub fn has_zeros(field: &FieldSpec, m: &FieldElement) -> Result<bool> {
    field.add(m, &field.zero())?;
    let p = field.p();
    if !m.is_zero() {
        let degree = field.degree_over_prime(m)? as u64;
        if degree > (p - 1) / 2 {
            return Ok(false);
        }
    }
    let rows_to_scan = if p == 2 { p - 1 } else { (p - 1) / 2 };
    let width = usize::try_from(p)
        .map_err(|_| Error::capacity("characteristic too large to scan rows"))?;
    let m_enc = m.encode();
    let mut prev = vec![1u64; width];
    let mut cur = vec![0u64; width];
    for _ in 1..=rows_to_scan {
        cur[0] = 1;
        for j in 1..width {
            let mixed = field.mul_enc(m_enc, prev[j - 1]);
            cur[j] = field.add_enc(field.add_enc(prev[j], mixed), cur[j - 1]);
            if cur[j] == 0 {
                return Ok(true);
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(false)
}

/// Zero positions of a fundamental block, split into the regular family
/// predicted by the block's parameters and the sporadic remainder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroReport {
    pub zeros: Vec<(usize, usize)>,
    pub regular: Vec<(usize, usize)>,
    pub sporadic: Vec<(usize, usize)>,
}

/// Computes the zero set of `F(p, m)` and partitions it.
///
/// The regular family is the central cross for `m = 1`, the odd main
/// diagonal for `m = -2`, the odd anti-diagonal for `m = -2^(-1)`, and
/// otherwise the orbit of the first-row zero under the support's symmetry
/// subgroup (empty when `m` lies outside the prime subfield, where row 1 has
/// no zero).
pub fn zero_report(field: &FieldSpec, m: &FieldElement) -> Result<ZeroReport> {
    let block = fundamental_block(field, m)?;
    let side = block.side();
    let mut zeros = Vec::new();
    for i in 0..side {
        for j in 0..side {
            if block.encoding(i, j) == 0 {
                zeros.push((i, j));
            }
        }
    }
    let regular = regular_zero_family(field, m, &block.support()?)?;
    for &pos in &regular {
        if !zeros.contains(&pos) {
            return Err(Error::internal(format!(
                "predicted regular zero {pos:?} is not a zero"
            )));
        }
    }
    let sporadic: Vec<(usize, usize)> =
        zeros.iter().copied().filter(|pos| !regular.contains(pos)).collect();
    Ok(ZeroReport { zeros, regular, sporadic })
}

fn regular_zero_family(
    field: &FieldSpec,
    m: &FieldElement,
    support: &SupportMatrix,
) -> Result<Vec<(usize, usize)>> {
    let p = field.p();
    if !m.in_prime_subfield() {
        return Ok(Vec::new());
    }
    let r = m.coeffs()[0];
    if r == p - 1 {
        return Ok(Vec::new());
    }
    let side = p as usize;
    let mut out = Vec::new();
    if r == 1 && p > 2 {
        let c = side / 2;
        for i in (1..side).step_by(2) {
            out.push((c, i));
        }
        for i in (1..side).step_by(2) {
            if i != c {
                out.push((i, c));
            }
        }
    } else if p > 2 && r == p - 2 {
        for i in (1..side - 1).step_by(2) {
            out.push((i, i));
        }
    } else if p > 2 && is_neg_inverse_of_two(r, p) {
        for i in (1..side).step_by(2) {
            out.push((i, side - 1 - i));
        }
    } else {
        let k = first_row_zero_index(field, m)?
            .ok_or_else(|| Error::internal("regular family requested for m = -1"))?
            as usize;
        let subgroup = symmetry_subgroup(support);
        for iso in subgroup {
            let pos = iso.apply(1, k, side - 1);
            if !out.contains(&pos) {
                out.push(pos);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn is_neg_inverse_of_two(r: u64, p: u64) -> bool {
    // r = -(2^(-1))  <=>  2r = -1 (mod p)
    (2 * r) % p == p - 1
}

/// Zero counts of every block over GF(p) with `m != -1`, checked against the
/// proven lower bound for that prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroCountReport {
    pub p: u64,
    pub min_required: usize,
    pub counts: Vec<(u64, usize)>,
    pub pass: bool,
}

pub fn zero_count_bounds(p: u64) -> Result<ZeroCountReport> {
    let field = FieldSpec::prime(p)?;
    let min_required = if p >= 11 {
        4
    } else if p == 7 {
        3
    } else if p > 3 {
        2
    } else {
        1
    };
    let mut counts = Vec::new();
    let mut pass = true;
    for m_enc in 0..p {
        if m_enc == p - 1 {
            continue;
        }
        let m = field.decode(m_enc)?;
        let count = zero_report(&field, &m)?.zeros.len();
        if count < min_required {
            pass = false;
        }
        counts.push((m_enc, count));
    }
    Ok(ZeroCountReport { p, min_required, counts, pass })
}

/// Box-counting dimension of a support: `ln(nonzero count) / ln(side)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionReport {
    pub count: usize,
    pub ln_ratio: f64,
}

pub fn fractal_dimension(support: &SupportMatrix) -> Result<DimensionReport> {
    let count = support.ones_count();
    if count == 0 {
        return Err(Error::domain("support has no nonzero cells"));
    }
    let ln_ratio = (count as f64).ln() / (support.side() as f64).ln();
    Ok(DimensionReport { count, ln_ratio })
}

/// Scan guard: fields larger than this are refused by [`scan_field`].
pub const MAX_SCAN_ORDER: u64 = 1_000_000;

/// All multipliers `m` whose fundamental block has zeros, reduced modulo the
/// symmetries that preserve the zero pattern: `m`, `m^(-1)` and their
/// Frobenius conjugates share one orbit, reported by the smallest encoding.
pub fn scan_field(field: &FieldSpec) -> Result<Vec<u64>> {
    if field.order() > MAX_SCAN_ORDER {
        return Err(Error::capacity(format!(
            "field order {} exceeds the scan guard {MAX_SCAN_ORDER}",
            field.order()
        )));
    }
    let mut out = Vec::new();
    for enc in 0..field.order() {
        if orbit_minimum(field, enc)? < enc {
            continue;
        }
        let m = field.decode(enc)?;
        if has_zeros(field, &m)? {
            out.push(enc);
        }
    }
    Ok(out)
}

fn orbit_minimum(field: &FieldSpec, enc: u64) -> Result<u64> {
    let mut min = enc;
    if enc == 0 {
        return Ok(0);
    }
    let mut seeds = vec![enc, field.inv_enc(enc)?];
    seeds.dedup();
    for seed in seeds {
        let mut cur = seed;
        loop {
            min = min.min(cur);
            cur = field.frobenius_enc(cur);
            if cur == seed {
                break;
            }
        }
    }
    Ok(min)
}

/// Pairs of horizontally or vertically adjacent zeros in the fundamental
/// block.  Reported for inspection; no block over a prime field is known to
/// produce any.
pub fn edge_adjacent_zeros(
    field: &FieldSpec,
    m: &FieldElement,
) -> Result<Vec<((usize, usize), (usize, usize))>> {
    let block = fundamental_block(field, m)?;
    let side = block.side();
    let mut out = Vec::new();
    for i in 0..side {
        for j in 0..side {
            if block.encoding(i, j) != 0 {
                continue;
            }
            if j + 1 < side && block.encoding(i, j + 1) == 0 {
                out.push(((i, j), (i, j + 1)));
            }
            if i + 1 < side && block.encoding(i + 1, j) == 0 {
                out.push(((i, j), (i + 1, j)));
            }
        }
    }
    Ok(out)
}

/// The exact central alternating sum
/// `S(n) = sum over a of (-2)^a * C(n, a) * C(2n - a, n - a)`:
/// zero for odd `n`, `(-1)^s * C(2s, s)` for `n = 2s`.
pub fn central_sum(n: u64) -> BigInt {
    let mut acc = BigInt::zero();
    for a in 0..=n {
        let term = big_binomial(n, a) * big_binomial(2 * n - a, n - a);
        let signed = BigInt::from(term) << a;
        if a % 2 == 0 {
            acc += signed;
        } else {
            acc -= signed;
        }
    }
    acc
}

fn big_binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// Number of lattice paths from the origin to `(n, k)` using south, east and
/// south-east steps; equals the carpet recurrence evaluated over the
/// integers with `m = 1`.
pub fn delannoy(n: u64, k: u64) -> BigUint {
    let cols = k as usize + 1;
    let mut prev: Vec<BigUint> = vec![BigUint::one(); cols];
    for _ in 1..=n {
        let mut cur = Vec::with_capacity(cols);
        cur.push(BigUint::one());
        for j in 1..cols {
            let val = &prev[j] + &prev[j - 1] + &cur[j - 1];
            cur.push(val);
        }
        prev = cur;
    }
    prev[cols - 1].clone()
}

/// Counts the same paths one by one by exhaustive walk.  Exponential; only
/// useful as an independent cross-check at tiny sizes.
pub fn delannoy_path_count(n: u64, k: u64) -> BigUint {
    fn walk(i: u64, j: u64, n: u64, k: u64) -> u64 {
        if i == n && j == k {
            return 1;
        }
        let mut total = 0;
        if i < n {
            total += walk(i + 1, j, n, k);
        }
        if j < k {
            total += walk(i, j + 1, n, k);
        }
        if i < n && j < k {
            total += walk(i + 1, j + 1, n, k);
        }
        total
    }
    BigUint::from(walk(0, 0, n, k))
}
