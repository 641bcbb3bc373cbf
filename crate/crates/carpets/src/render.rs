//! Raster output: plain PBM for the black/white pattern of a support, and
//! binary PPM for value-colored images.

use std::collections::BTreeMap;

use crate::carpet::{Matrix, SupportMatrix};
use crate::error::{Error, Result};
use crate::field::FieldSpec;

pub const WHITE: [u8; 3] = [255, 255, 255];
pub const BLACK: [u8; 3] = [0, 0, 0];

/// Map from field-element encodings to RGB triples.  Encoding 0 is always
/// pure white; the constructor inserts that entry when missing and rejects
/// any attempt to recolor it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    colors: BTreeMap<u64, [u8; 3]>,
}

impl Palette {
    pub fn new(mut colors: BTreeMap<u64, [u8; 3]>) -> Result<Self> {
        match colors.get(&0) {
            Some(&WHITE) | None => {}
            Some(other) => {
                return Err(Error::usage(format!(
                    "encoding 0 must stay white, found {other:?}"
                )))
            }
        }
        colors.insert(0, WHITE);
        Ok(Palette { colors })
    }

    pub fn color(&self, encoding: u64) -> Option<[u8; 3]> {
        self.colors.get(&encoding).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, [u8; 3])> + '_ {
        self.colors.iter().map(|(&e, &c)| (e, c))
    }
}

/// Deterministic palette for a whole field: white for 0 and evenly spaced
/// hues for the nonzero encodings, except that a two-element field gets
/// plain black on white.
///
/// With `symmetric` set, encodings `e` and `p - e` receive the same hue by
/// folding the index to `min(e, p - e)`; this follows the mirror pairing of
/// block values and is defined for prime fields only.
pub fn default_palette(field: &FieldSpec, symmetric: bool) -> Result<Palette> {
    if symmetric && field.k() > 1 {
        return Err(Error::usage(
            "the symmetric palette folds e with p - e, which needs a prime field",
        ));
    }
    let q = field.order();
    let mut colors = BTreeMap::new();
    colors.insert(0, WHITE);
    if q == 2 {
        colors.insert(1, BLACK);
        return Palette::new(colors);
    }
    let p = field.p();
    for e in 1..q {
        let index = if symmetric { e.min(p - e) } else { e };
        let hue = (index - 1) as f64 / (q - 1) as f64;
        colors.insert(e, hue_to_rgb(hue));
    }
    Palette::new(colors)
}

/// Full-saturation, full-value hue ramp; `hue` is in turns.
fn hue_to_rgb(hue: f64) -> [u8; 3] {
    let h6 = (hue * 6.0).rem_euclid(6.0);
    let x = 1.0 - ((h6 % 2.0) - 1.0).abs();
    let (r, g, b) = match h6 as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    [channel(r), channel(g), channel(b)]
}

fn channel(v: f64) -> u8 {
    (v * 255.0).round() as u8
}

const PBM_LINE_LIMIT: usize = 70;

/// Plain PBM (P1): nonzero cells are black (1), zero cells white (0).  Each
/// matrix row is a run of digits, split into lines of at most 70 characters.
pub fn to_pbm(support: &SupportMatrix) -> String {
    let side = support.side();
    let mut out = format!("P1\n{side} {side}\n");
    for i in 0..side {
        for j in 0..side {
            if j > 0 && j % PBM_LINE_LIMIT == 0 {
                out.push('\n');
            }
            out.push(if support.get(i, j) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

/// Binary PPM (P6): pixel (i, j) takes the palette color of entry (i, j).
pub fn to_ppm(matrix: &Matrix, palette: &Palette) -> Result<Vec<u8>> {
    let rows = matrix.rows();
    let cols = matrix.cols();
    let mut out = format!("P6\n{cols} {rows}\n255\n").into_bytes();
    out.reserve(rows * cols * 3);
    for i in 0..rows {
        for j in 0..cols {
            let encoding = matrix.encoding(i, j);
            let rgb = palette.color(encoding).ok_or_else(|| {
                Error::usage(format!("palette has no color for encoding {encoding}"))
            })?;
            out.extend_from_slice(&rgb);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::{fundamental_block, generate_recurrence, CarpetParams};
    use crate::field::FieldElement;

    fn gf(descriptor: &str) -> FieldSpec {
        descriptor.parse().expect("valid descriptor")
    }

    fn elem(field: &FieldSpec, enc: u64) -> FieldElement {
        field.decode(enc).expect("encoding in range")
    }

    #[test]
    fn single_cell_pbm() {
        let support = SupportMatrix::new(1, vec![1]).unwrap();
        assert_eq!(to_pbm(&support), "P1\n1 1\n1\n");
        let support = SupportMatrix::new(1, vec![0]).unwrap();
        assert_eq!(to_pbm(&support), "P1\n1 1\n0\n");
    }

    #[test]
    fn block_pbm_has_a_single_white_center() {
        let field = gf("3");
        let block = fundamental_block(&field, &elem(&field, 1)).unwrap();
        let pbm = to_pbm(&block.support().unwrap());
        assert_eq!(pbm, "P1\n3 3\n111\n101\n111\n");
    }

    #[test]
    fn long_rows_wrap_at_seventy_characters() {
        let side = 80;
        let support = SupportMatrix::new(side, vec![1; side * side]).unwrap();
        let pbm = to_pbm(&support);
        let mut lines = pbm.lines();
        assert_eq!(lines.next(), Some("P1"));
        assert_eq!(lines.next(), Some("80 80"));
        let body: Vec<&str> = lines.collect();
        assert!(body.iter().all(|l| l.len() <= 70));
        assert_eq!(body.len(), side * 2);
        assert_eq!(body[0].len(), 70);
        assert_eq!(body[1].len(), 10);
        let digits: usize = body.iter().map(|l| l.len()).sum();
        assert_eq!(digits, side * side);
    }

    #[test]
    fn ppm_pixels_follow_the_palette() {
        let field = gf("3");
        let block = fundamental_block(&field, &elem(&field, 1)).unwrap();
        let mut colors = BTreeMap::new();
        colors.insert(1, BLACK);
        colors.insert(2, [255, 0, 0]);
        let palette = Palette::new(colors).unwrap();
        let ppm = to_ppm(block.matrix(), &palette).unwrap();
        let header: &[u8] = b"P6\n3 3\n255\n";
        assert_eq!(&ppm[..header.len()], header);
        let pixels = &ppm[header.len()..];
        assert_eq!(pixels.len(), 27);
        // Row 1 of the block is (1, 0, 2): black, white, red.
        assert_eq!(&pixels[9..18], &[0, 0, 0, 255, 255, 255, 255, 0, 0]);
    }

    #[test]
    fn missing_palette_entry_is_a_usage_error() {
        let field = gf("5");
        let block = fundamental_block(&field, &elem(&field, 2)).unwrap();
        let palette = Palette::new(BTreeMap::new()).unwrap();
        assert!(matches!(
            to_ppm(block.matrix(), &palette),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn zero_stays_white() {
        let mut colors = BTreeMap::new();
        colors.insert(0, [1, 2, 3]);
        assert!(matches!(Palette::new(colors), Err(Error::Usage(_))));
        let palette = Palette::new(BTreeMap::new()).unwrap();
        assert_eq!(palette.color(0), Some(WHITE));
        for desc in ["2", "5", "3^2/1,0,1"] {
            let palette = default_palette(&gf(desc), false).unwrap();
            assert_eq!(palette.color(0), Some(WHITE), "field {desc}");
        }
    }

    #[test]
    fn two_element_field_renders_black_on_white() {
        let palette = default_palette(&gf("2"), false).unwrap();
        assert_eq!(palette.color(0), Some(WHITE));
        assert_eq!(palette.color(1), Some(BLACK));
        assert_eq!(palette.entries().count(), 2);
    }

    #[test]
    fn default_hues_are_frozen() {
        let palette = default_palette(&gf("5"), false).unwrap();
        assert_eq!(palette.color(1), Some([255, 0, 0]));
        assert_eq!(palette.color(2), Some([128, 255, 0]));
        assert_eq!(palette.color(3), Some([0, 255, 255]));
        assert_eq!(palette.color(4), Some([128, 0, 255]));
    }

    #[test]
    fn symmetric_palette_folds_mirror_pairs() {
        let palette = default_palette(&gf("5"), true).unwrap();
        assert_eq!(palette.color(1), palette.color(4));
        assert_eq!(palette.color(2), palette.color(3));
        assert_ne!(palette.color(1), palette.color(2));
        assert_eq!(palette.color(0), Some(WHITE));

        let palette = default_palette(&gf("7"), true).unwrap();
        for e in 1..7 {
            assert_eq!(palette.color(e), palette.color(7 - e), "e = {e}");
        }
    }

    #[test]
    fn symmetric_palette_needs_a_prime_field() {
        assert!(matches!(
            default_palette(&gf("2^2"), true),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            default_palette(&gf("3^2/1,0,1"), true),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn symmetric_image_of_the_cross_block_has_all_eight_symmetries() {
        use crate::analysis::Isometry;
        let field = gf("5");
        let params = CarpetParams::new(field.clone(), elem(&field, 1), 2).unwrap();
        let carpet = generate_recurrence(&params).unwrap();
        let palette = default_palette(&field, true).unwrap();
        let side = carpet.side();
        let pixel = |i: usize, j: usize| palette.color(carpet.encoding(i, j)).unwrap();
        for iso in Isometry::ALL {
            for i in 0..side {
                for j in 0..side {
                    let (oi, oj) = iso.apply(i, j, side - 1);
                    assert_eq!(pixel(i, j), pixel(oi, oj), "{iso:?} at ({i}, {j})");
                }
            }
        }
        // The raw values do not have that symmetry, only the colors do.
        let raw_symmetric = (0..side).all(|i| {
            (0..side).all(|j| {
                let (oi, oj) = Isometry::FlipHorizontal.apply(i, j, side - 1);
                carpet.encoding(i, j) == carpet.encoding(oi, oj)
            })
        });
        assert!(!raw_symmetric);
    }

    #[test]
    fn deeper_carpets_nest_their_predecessors() {
        for (desc, m_enc) in [("3", 1), ("5", 2), ("3^2/1,0,1", 4), ("2^2", 2)] {
            let field = gf(desc);
            let m = elem(&field, m_enc);
            let side = field.p() as usize;
            let mut previous: Option<Vec<u64>> = None;
            for depth in 1..=3 {
                let params = CarpetParams::new(field.clone(), m.clone(), depth).unwrap();
                let carpet = generate_recurrence(&params).unwrap();
                if let Some(prev) = previous {
                    let small = side.pow(depth - 1);
                    let corner: Vec<u64> = (0..small)
                        .flat_map(|i| {
                            (0..small).map(move |j| (i, j))
                        })
                        .map(|(i, j)| carpet.encoding(i, j))
                        .collect();
                    assert_eq!(corner, prev, "field {desc}, m {m_enc}, depth {depth}");
                }
                previous = Some(carpet.encodings().to_vec());
            }
        }
    }

    #[test]
    fn pbm_nesting_matches_the_value_nesting() {
        let field = gf("3");
        let m = elem(&field, 1);
        let mut previous: Option<String> = None;
        for depth in 1..=4 {
            let params = CarpetParams::new(field.clone(), m.clone(), depth).unwrap();
            let carpet = generate_recurrence(&params).unwrap();
            let support = carpet.support().unwrap();
            if let Some(prev) = previous {
                let corner = support.corner(3usize.pow(depth - 1)).unwrap();
                assert_eq!(to_pbm(&corner), prev, "depth {depth}");
            }
            previous = Some(to_pbm(&support));
        }
    }
}
