//! Tile sets whose matching rules reproduce the carpets, and the empty-square
//! witness for their lack of translation symmetry.
//!
//! Tiles are combinatorial: a kind tag plus named color regions, with the
//! geometry of the shaped edges left implicit.  A catalog built for a block
//! with zeros assembles, cell by cell, into exactly the carpet matrix, and the
//! assembler checks at every cell that the choice of tile is forced.

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::analysis::has_zeros;
use crate::carpet::{
    generate_recurrence, guard_dense, CarpetMatrix, CarpetParams, Matrix, SupportMatrix,
};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// Upper bound on catalog size; `r^3 + 2` grows fast with the subfield.
pub const MAX_TILE_CATALOG: u64 = 1 << 24;

/// One colored tile.  Colors are field-element encodings; 0 renders white.
///
/// `Corner` and `Border` carry the fixed body color 1; the border tile is
/// placed along the top edge as is and along the left edge rotated a quarter
/// turn.  `Interior` obeys `body = west + m * northwest + north`, and
/// `PascalSquare` obeys `body = north + west`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tile {
    Corner,
    Border,
    Interior { west: u64, northwest: u64, north: u64, body: u64 },
    PascalSquare { north: u64, west: u64, body: u64 },
}

impl Tile {
    pub fn kind(&self) -> &'static str {
        match self {
            Tile::Corner => "TYPE_ONE",
            Tile::Border => "TYPE_TWO",
            Tile::Interior { .. } => "TYPE_THREE",
            Tile::PascalSquare { .. } => "PASCAL",
        }
    }

    pub fn body(&self) -> u64 {
        match *self {
            Tile::Corner | Tile::Border => 1,
            Tile::Interior { body, .. } => body,
            Tile::PascalSquare { body, .. } => body,
        }
    }
}

struct Regions<'a>(&'a [(&'static str, u64)]);

impl Serialize for Regions<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().map(|&(name, color)| (name, color)))
    }
}

impl Serialize for Tile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Tile", 2)?;
        st.serialize_field("kind", self.kind())?;
        match *self {
            Tile::Corner | Tile::Border => {
                st.serialize_field("regions", &Regions(&[("big_body", 1)]))?;
            }
            Tile::Interior { west, northwest, north, body } => {
                st.serialize_field(
                    "regions",
                    &Regions(&[
                        ("west", west),
                        ("northwest", northwest),
                        ("north", north),
                        ("big_body", body),
                    ]),
                )?;
            }
            Tile::PascalSquare { north, west, body } => {
                st.serialize_field(
                    "regions",
                    &Regions(&[("north", north), ("west", west), ("big_southeast", body)]),
                )?;
            }
        }
        st.end()
    }
}

/// Which of the two catalog constructions applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TileCase {
    MZero,
    MNonzero,
}

impl TileCase {
    pub fn name(self) -> &'static str {
        match self {
            TileCase::MZero => "m_zero",
            TileCase::MNonzero => "m_nonzero",
        }
    }
}

/// A complete tile catalog for one `(field, m)` pair.
#[derive(Debug, Clone)]
pub struct TileSet {
    field: FieldSpec,
    m: FieldElement,
    case: TileCase,
    r: Option<u64>,
    tiles: Vec<Tile>,
}

impl TileSet {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn m(&self) -> &FieldElement {
        &self.m
    }

    pub fn case(&self) -> TileCase {
        self.case
    }

    /// Size of the subfield generated by `m`; absent in the `m = 0` case.
    pub fn r(&self) -> Option<u64> {
        self.r
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }
}

impl Serialize for TileSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TileSet", 3)?;
        st.serialize_field("case", self.case.name())?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("tiles", &self.tiles)?;
        st.end()
    }
}

/// Builds the tile catalog for a block that has at least one zero.
///
/// For `m = 0` the catalog is one square tile per pair of prime-subfield
/// colors (north, west) with body north + west.  For `m != 0` it is the
/// corner tile, the border tile, and one interior tile per color triple
/// (west, northwest, north) over the subfield generated by `m`.
pub fn build_tile_set(field: &FieldSpec, m: &FieldElement) -> Result<TileSet> {
    field.add(m, &field.zero())?;
    if !has_zeros(field, m)? {
        return Err(Error::domain(format!(
            "the block for m = {} has no zero cells, so its tilings have no holes to force aperiodicity",
            m.encode()
        )));
    }
    let p = field.p();
    if m.is_zero() {
        let mut tiles = Vec::with_capacity((p * p) as usize);
        for north in 0..p {
            for west in 0..p {
                let body = field.add_enc(north, west);
                tiles.push(Tile::PascalSquare { north, west, body });
            }
        }
        return Ok(TileSet {
            field: field.clone(),
            m: m.clone(),
            case: TileCase::MZero,
            r: None,
            tiles,
        });
    }
    let degree = field.degree_over_prime(m)? as u32;
    let r = p
        .checked_pow(degree)
        .ok_or_else(|| Error::capacity("subfield generated by m does not fit in u64"))?;
    let catalog_size = r
        .checked_pow(3)
        .and_then(|c| c.checked_add(2))
        .filter(|&c| c <= MAX_TILE_CATALOG)
        .ok_or_else(|| {
            Error::capacity(format!(
                "tile catalog needs r^3 + 2 tiles with r = {r}, above the limit {MAX_TILE_CATALOG}"
            ))
        })?;
    let colors = subfield_generated_by(field, m, degree)?;
    let m_enc = m.encode();
    let mut tiles = Vec::with_capacity(catalog_size as usize);
    tiles.push(Tile::Corner);
    tiles.push(Tile::Border);
    for &west in &colors {
        for &northwest in &colors {
            let mixed = field.mul_enc(m_enc, northwest);
            for &north in &colors {
                let body = field.add_enc(field.add_enc(west, mixed), north);
                tiles.push(Tile::Interior { west, northwest, north, body });
            }
        }
    }
    Ok(TileSet {
        field: field.clone(),
        m: m.clone(),
        case: TileCase::MNonzero,
        r: Some(r),
        tiles,
    })
}

/// Encodings of the span of `1, m, ..., m^(degree-1)` over the prime
/// subfield, sorted ascending.
fn subfield_generated_by(
    field: &FieldSpec,
    m: &FieldElement,
    degree: u32,
) -> Result<Vec<u64>> {
    let p = field.p();
    let m_enc = m.encode();
    let mut colors = vec![0u64];
    let mut power = 1u64;
    for _ in 0..degree {
        let mut next = Vec::with_capacity(colors.len() * p as usize);
        for scalar in 0..p {
            let step = field.mul_enc(scalar, power);
            for &base in &colors {
                next.push(field.add_enc(base, step));
            }
        }
        colors = next;
        power = field.mul_enc(power, m_enc);
    }
    colors.sort_unstable();
    colors.dedup();
    let expected = (p as u128).pow(degree);
    if colors.len() as u128 != expected {
        return Err(Error::internal(format!(
            "span of m-powers has {} elements, expected {expected}",
            colors.len()
        )));
    }
    Ok(colors)
}

/// Assembles the depth-`d` region from the catalog and returns the matrix of
/// body colors, which always equals the generated carpet.
///
/// Cells are filled row-major.  At every cell the whole catalog is scanned
/// and exactly one tile must satisfy the matching rules there; zero or
/// several matches signal a broken catalog and raise an internal error.  In
/// the `m = 0` case the axes are not tiles: row 0 and column 0 take the
/// marking color 1 and tiles occupy the remaining cells.
pub fn assemble(tileset: &TileSet, depth: u32) -> Result<CarpetMatrix> {
    let field = tileset.field.clone();
    let params = CarpetParams::new(field.clone(), tileset.m.clone(), depth)?;
    let side_u64 = params.side();
    guard_dense(side_u64 as u128 * side_u64 as u128, "assembled region")?;
    let side = side_u64 as usize;
    let mut data = vec![0u64; side * side];
    for i in 0..side {
        for j in 0..side {
            let want = CellMatch::for_cell(tileset.case, i, j, side, &data);
            if let CellMatch::Marking = want {
                data[i * side + j] = 1;
                continue;
            }
            let mut matched: Option<&Tile> = None;
            let mut count = 0usize;
            for tile in &tileset.tiles {
                if want.accepts(tile) {
                    count += 1;
                    matched = Some(tile);
                }
            }
            match count {
                1 => data[i * side + j] = matched.expect("counted").body(),
                0 => {
                    return Err(Error::internal(format!(
                        "no tile in the catalog fits cell ({i}, {j})"
                    )))
                }
                n => {
                    return Err(Error::internal(format!(
                        "{n} tiles fit cell ({i}, {j}); tile choice is not forced"
                    )))
                }
            }
        }
    }
    let matrix = Matrix::new(field, side, side, data)?;
    Ok(CarpetMatrix::from_parts(params, matrix))
}

/// Matching rule at one cell, derived from its position and the bodies of
/// the already placed neighbors.
enum CellMatch {
    /// Axis marking in the `m = 0` case; no tile is placed.
    Marking,
    CornerTile,
    BorderTile,
    InteriorTile { west: u64, northwest: u64, north: u64 },
    PascalTile { north: u64, west: u64 },
}

impl CellMatch {
    fn for_cell(case: TileCase, i: usize, j: usize, side: usize, data: &[u64]) -> CellMatch {
        match case {
            TileCase::MZero => {
                if i == 0 || j == 0 {
                    CellMatch::Marking
                } else {
                    CellMatch::PascalTile {
                        north: data[(i - 1) * side + j],
                        west: data[i * side + j - 1],
                    }
                }
            }
            TileCase::MNonzero => {
                if i == 0 && j == 0 {
                    CellMatch::CornerTile
                } else if i == 0 || j == 0 {
                    CellMatch::BorderTile
                } else {
                    CellMatch::InteriorTile {
                        west: data[i * side + j - 1],
                        northwest: data[(i - 1) * side + j - 1],
                        north: data[(i - 1) * side + j],
                    }
                }
            }
        }
    }

    fn accepts(&self, tile: &Tile) -> bool {
        match (self, tile) {
            (CellMatch::Marking, _) => false,
            (CellMatch::CornerTile, Tile::Corner) => true,
            (CellMatch::BorderTile, Tile::Border) => true,
            (
                CellMatch::InteriorTile { west, northwest, north },
                Tile::Interior { west: w, northwest: nw, north: n, .. },
            ) => west == w && northwest == nw && north == n,
            (
                CellMatch::PascalTile { north, west },
                Tile::PascalSquare { north: n, west: w, .. },
            ) => north == n && west == w,
            _ => false,
        }
    }
}

/// Side of the largest all-zero square submatrix of a support.
pub fn largest_empty_square(support: &SupportMatrix) -> usize {
    let side = support.side();
    let mut best = 0usize;
    let mut below = vec![0usize; side + 1];
    for i in (0..side).rev() {
        let mut cur = vec![0usize; side + 1];
        for j in (0..side).rev() {
            if !support.get(i, j) {
                cur[j] = 1 + cur[j + 1].min(below[j]).min(below[j + 1]);
                best = best.max(cur[j]);
            }
        }
        below = cur;
    }
    best
}

/// Largest empty square of the depth-`d` carpet for `d = 1..=d_max`.
///
/// The sequence is strictly increasing (each tensor step scales every hole
/// by at least the side of the block): translating the pattern by less than
/// the largest hole cannot map it onto itself, which is the finite
/// observation behind the aperiodicity of the tilings.
pub fn aperiodicity_witness(
    field: &FieldSpec,
    m: &FieldElement,
    d_max: u32,
) -> Result<Vec<usize>> {
    if d_max == 0 {
        return Err(Error::usage("witness depth must be at least 1"));
    }
    if !has_zeros(field, m)? {
        return Err(Error::domain(format!(
            "the block for m = {} has no zero cells, so every hole is empty and no witness exists",
            m.encode()
        )));
    }
    let mut sides = Vec::with_capacity(d_max as usize);
    for depth in 1..=d_max {
        let params = CarpetParams::new(field.clone(), m.clone(), depth)?;
        let carpet = generate_recurrence(&params)?;
        let hole = largest_empty_square(&carpet.support()?);
        if let Some(&prev) = sides.last() {
            if hole <= prev {
                return Err(Error::internal(format!(
                    "empty squares stopped growing at depth {depth}: {prev} then {hole}"
                )));
            }
        }
        sides.push(hole);
    }
    Ok(sides)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::fundamental_block;

    fn gf(descriptor: &str) -> FieldSpec {
        descriptor.parse().expect("valid descriptor")
    }

    fn elem(field: &FieldSpec, enc: u64) -> FieldElement {
        field.decode(enc).expect("encoding in range")
    }

    #[test]
    fn catalog_sizes_match_the_bounds() {
        let f3 = gf("3");
        let pascal = build_tile_set(&f3, &f3.zero()).unwrap();
        assert_eq!(pascal.tiles().len(), 9);
        assert_eq!(pascal.case(), TileCase::MZero);
        assert_eq!(pascal.r(), None);

        let cross = build_tile_set(&f3, &elem(&f3, 1)).unwrap();
        assert_eq!(cross.tiles().len(), 29);
        assert_eq!(cross.case(), TileCase::MNonzero);
        assert_eq!(cross.r(), Some(3));
    }

    #[test]
    fn extension_multiplier_enlarges_the_catalog() {
        // Over GF(25) with modulus x^2 + x + 1 the element x satisfies
        // x^2 + x + 1 = 0, which puts a zero at cell (2, 2) of the block, and
        // generates the whole field: r = 25.
        let f25 = gf("5^2");
        let m = elem(&f25, 5);
        let block = fundamental_block(&f25, &m).unwrap();
        assert_eq!(block.encoding(2, 2), 0);
        let set = build_tile_set(&f25, &m).unwrap();
        assert_eq!(set.r(), Some(25));
        assert_eq!(set.tiles().len(), 25 * 25 * 25 + 2);
    }

    #[test]
    fn blocks_without_zeros_are_rejected() {
        let f2 = gf("2");
        assert!(matches!(
            build_tile_set(&f2, &elem(&f2, 1)),
            Err(Error::Domain(_))
        ));
        let f5 = gf("5");
        assert!(matches!(
            build_tile_set(&f5, &elem(&f5, 4)),
            Err(Error::Domain(_))
        ));
        // Over GF(9) the element x has degree 2 over the prime subfield,
        // above the zero-existence threshold (3 - 1) / 2 = 1.
        let f9 = gf("3^2/1,0,1");
        assert!(matches!(
            build_tile_set(&f9, &elem(&f9, 3)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn huge_subfields_hit_the_catalog_guard() {
        let f361 = gf("19^2/1,0,1");
        let m = elem(&f361, 21);
        assert!(has_zeros(&f361, &m).unwrap());
        assert!(matches!(build_tile_set(&f361, &m), Err(Error::Capacity(_))));
    }

    #[test]
    fn assembly_reproduces_the_carpet() {
        for (desc, m_enc) in [("3", 1), ("3", 0), ("5", 2), ("7", 5), ("2", 0)] {
            let field = gf(desc);
            let m = elem(&field, m_enc);
            let set = build_tile_set(&field, &m).unwrap();
            for depth in 1..=2 {
                let assembled = assemble(&set, depth).unwrap();
                let params = CarpetParams::new(field.clone(), m.clone(), depth).unwrap();
                let generated = generate_recurrence(&params).unwrap();
                assert_eq!(
                    assembled.encodings(),
                    generated.encodings(),
                    "field {desc}, m {m_enc}, depth {depth}"
                );
            }
        }
    }

    #[test]
    fn assembly_works_over_extension_fields() {
        let f25 = gf("5^2");
        let m = elem(&f25, 5);
        let set = build_tile_set(&f25, &m).unwrap();
        let assembled = assemble(&set, 1).unwrap();
        let generated = fundamental_block(&f25, &m).unwrap();
        assert_eq!(assembled.encodings(), generated.encodings());

        // Pascal construction with the small catalog also runs in a larger
        // field, colors staying inside the prime subfield.
        let f4 = gf("2^2");
        let set = build_tile_set(&f4, &f4.zero()).unwrap();
        assert_eq!(set.tiles().len(), 4);
        let assembled = assemble(&set, 2).unwrap();
        let params = CarpetParams::new(f4.clone(), f4.zero(), 2).unwrap();
        let generated = generate_recurrence(&params).unwrap();
        assert_eq!(assembled.encodings(), generated.encodings());
    }

    #[test]
    fn pascal_corner_tile_shows_the_closing_rule() {
        let f3 = gf("3");
        let set = build_tile_set(&f3, &f3.zero()).unwrap();
        let assembled = assemble(&set, 1).unwrap();
        // Axes carry the marking color 1; the tile touching the origin has
        // north = west = 1 and body 2.
        assert_eq!(assembled.encoding(0, 0), 1);
        assert_eq!(assembled.encoding(0, 1), 1);
        assert_eq!(assembled.encoding(1, 0), 1);
        assert_eq!(assembled.encoding(1, 1), 2);
    }

    #[test]
    fn tile_json_shapes() {
        let tile = Tile::Interior { west: 1, northwest: 2, north: 0, body: 3 };
        let json = serde_json::to_value(&tile).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "kind": "TYPE_THREE",
                "regions": {"west": 1, "northwest": 2, "north": 0, "big_body": 3}
            })
        );
        let tile = Tile::PascalSquare { north: 2, west: 2, body: 1 };
        let json = serde_json::to_value(&tile).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "kind": "PASCAL",
                "regions": {"north": 2, "west": 2, "big_southeast": 1}
            })
        );
        assert_eq!(
            serde_json::to_value(Tile::Corner).unwrap(),
            serde_json::json!({"kind": "TYPE_ONE", "regions": {"big_body": 1}})
        );
        assert_eq!(
            serde_json::to_value(Tile::Border).unwrap(),
            serde_json::json!({"kind": "TYPE_TWO", "regions": {"big_body": 1}})
        );
    }

    #[test]
    fn tileset_json_shape() {
        let f2 = gf("2");
        let set = build_tile_set(&f2, &f2.zero()).unwrap();
        let json = serde_json::to_value(&set).unwrap();
        assert_eq!(json["case"], "m_zero");
        assert!(json["r"].is_null());
        assert_eq!(json["tiles"].as_array().unwrap().len(), 4);
        let f3 = gf("3");
        let set = build_tile_set(&f3, &elem(&f3, 1)).unwrap();
        let json = serde_json::to_value(&set).unwrap();
        assert_eq!(json["case"], "m_nonzero");
        assert_eq!(json["r"], 3);
        assert_eq!(json["tiles"][0]["kind"], "TYPE_ONE");
        assert_eq!(json["tiles"][1]["kind"], "TYPE_TWO");
        assert_eq!(json["tiles"][2]["kind"], "TYPE_THREE");
    }

    #[test]
    fn empty_square_examples() {
        let f3 = gf("3");
        let all_ones = fundamental_block(&f3, &elem(&f3, 2)).unwrap();
        assert_eq!(largest_empty_square(&all_ones.support().unwrap()), 0);

        let params = CarpetParams::new(f3.clone(), elem(&f3, 1), 2).unwrap();
        let carpet = generate_recurrence(&params).unwrap();
        assert_eq!(largest_empty_square(&carpet.support().unwrap()), 3);

        let params = CarpetParams::new(f3.clone(), elem(&f3, 1), 3).unwrap();
        let carpet = generate_recurrence(&params).unwrap();
        assert_eq!(largest_empty_square(&carpet.support().unwrap()), 9);
    }

    #[test]
    fn empty_square_on_a_hand_pattern() {
        // 0 1 1 0
        // 0 0 0 0
        // 1 0 0 0
        // 1 0 0 0
        let bits = vec![0, 1, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0];
        let support = SupportMatrix::new(4, bits).unwrap();
        assert_eq!(largest_empty_square(&support), 3);
    }

    #[test]
    fn witness_grows_by_the_block_side() {
        let f3 = gf("3");
        let witness = aperiodicity_witness(&f3, &elem(&f3, 1), 3).unwrap();
        assert_eq!(witness, vec![1, 3, 9]);

        let f5 = gf("5");
        let witness = aperiodicity_witness(&f5, &f5.zero(), 2).unwrap();
        assert_eq!(witness[0], 2);
        assert_eq!(witness.len(), 2);
        assert!(witness[1] >= 2 * 5);
    }

    #[test]
    fn witness_requires_zeros_and_a_depth() {
        let f2 = gf("2");
        assert!(matches!(
            aperiodicity_witness(&f2, &elem(&f2, 1), 3),
            Err(Error::Domain(_))
        ));
        let f3 = gf("3");
        assert!(matches!(
            aperiodicity_witness(&f3, &elem(&f3, 1), 0),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn witness_growth_is_at_least_linear_in_the_side() {
        for (desc, m_enc) in [("2", 0), ("3", 0), ("5", 1), ("5", 2), ("7", 3)] {
            let field = gf(desc);
            let m = elem(&field, m_enc);
            let p = field.p() as usize;
            let witness = aperiodicity_witness(&field, &m, 3).unwrap();
            for w in witness.windows(2) {
                assert!(w[1] >= p * w[0], "field {desc}, m {m_enc}: {witness:?}");
            }
        }
    }

    #[test]
    fn catalog_has_no_duplicate_tiles() {
        let f5 = gf("5");
        for m_enc in [0u64, 1, 2] {
            let set = build_tile_set(&f5, &elem(&f5, m_enc)).unwrap();
            let mut seen = set.tiles().to_vec();
            seen.sort_by_key(|t| format!("{t:?}"));
            let before = seen.len();
            seen.dedup();
            assert_eq!(seen.len(), before, "m {m_enc}");
        }
    }
}
