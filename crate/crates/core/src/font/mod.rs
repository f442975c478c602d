//! TrueType outline font parsing.
//!
//! Reads the table directory plus `head`, `hhea`, `maxp`, `hmtx`, `loca`,
//! `glyf`, `cmap` and `name`. Glyph outlines are decoded on demand from the
//! retained font bytes, so a [`FontFace`] is cheap to share between threads.

mod outline;
mod reader;
mod registry;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use unicode_normalization::UnicodeNormalization;

pub use outline::{AnchorPoint, Bounds, GlyphOutline};
pub use registry::FontRegistry;

use crate::error::{Error, Result};
use outline::normalize_contour;
use reader::Reader;

/// Composite glyphs nested deeper than this are rejected.
pub const MAX_COMPOSITE_DEPTH: usize = 8;

/// An NFC-normalized Unicode scalar value identifying one character class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codepoint(char);

impl Codepoint {
    /// Normalizes `c` to NFC. Fails if normalization does not yield a single
    /// scalar.
    pub fn new(c: char) -> Result<Self> {
        let mut it = std::iter::once(c).nfc();
        match (it.next(), it.next()) {
            (Some(n), None) => Ok(Self(n)),
            _ => Err(Error::ConfigRange(format!(
                "U+{:04X} does not normalize to a single code point",
                c as u32
            ))),
        }
    }

    pub fn from_u32(v: u32) -> Result<Self> {
        char::from_u32(v)
            .ok_or_else(|| Error::ConfigRange(format!("{v:#X} is not a Unicode scalar value")))
            .and_then(Self::new)
    }

    /// Parses a string that NFC-composes to exactly one scalar.
    pub fn from_text(s: &str) -> Result<Self> {
        let mut it = s.nfc();
        match (it.next(), it.next()) {
            (Some(c), None) => Ok(Self(c)),
            _ => Err(Error::ConfigRange(format!(
                "{s:?} is not a single character after NFC"
            ))),
        }
    }

    pub fn value(self) -> u32 {
        self.0 as u32
    }

    pub fn as_char(self) -> char {
        self.0
    }
}

impl fmt::Display for Codepoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U+{:04X}", self.0 as u32)
    }
}

#[derive(Clone, Copy, Debug)]
struct TableRecord {
    offset: usize,
    length: usize,
}

/// A parsed font. Immutable; outlines are decoded lazily by [`FontFace::glyph`].
#[derive(Clone)]
pub struct FontFace {
    data: Arc<[u8]>,
    units_per_em: u16,
    family_name: String,
    style_name: String,
    ascender: i16,
    descender: i16,
    glyph_count: u16,
    codepoint_map: BTreeMap<u32, u16>,
    hmetrics: Vec<(u16, i16)>,
    loca: Vec<u32>,
    glyf: Range<usize>,
}

impl fmt::Debug for FontFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FontFace")
            .field("family_name", &self.family_name)
            .field("style_name", &self.style_name)
            .field("units_per_em", &self.units_per_em)
            .field("glyph_count", &self.glyph_count)
            .field("mapped", &self.codepoint_map.len())
            .finish()
    }
}

impl FontFace {
    pub fn units_per_em(&self) -> u16 {
        self.units_per_em
    }

    pub fn family_name(&self) -> &str {
        &self.family_name
    }

    pub fn style_name(&self) -> &str {
        &self.style_name
    }

    pub fn ascender(&self) -> i16 {
        self.ascender
    }

    pub fn descender(&self) -> i16 {
        self.descender
    }

    pub fn glyph_count(&self) -> u16 {
        self.glyph_count
    }

    pub fn codepoint_map(&self) -> &BTreeMap<u32, u16> {
        &self.codepoint_map
    }

    pub fn glyph_index(&self, cp: Codepoint) -> Option<u16> {
        self.codepoint_map.get(&cp.value()).copied()
    }

    /// Loads the normalized outline mapped to `cp`.
    pub fn glyph_for(&self, cp: Codepoint) -> Result<GlyphOutline> {
        let gid = self.glyph_index(cp).ok_or(Error::MissingGlyph(cp.value()))?;
        self.glyph(gid)
    }

    /// Loads glyph `gid`, resolving composites.
    pub fn glyph(&self, gid: u16) -> Result<GlyphOutline> {
        let mut raw = Vec::new();
        self.load_contours(gid, 0, &mut raw)?;
        let contours = raw.iter().filter_map(|c| normalize_contour(c)).collect();
        Ok(GlyphOutline {
            contours,
            advance_width: self.advance(gid) as f64,
        })
    }

    pub fn advance(&self, gid: u16) -> u16 {
        let i = (gid as usize).min(self.hmetrics.len().saturating_sub(1));
        self.hmetrics.get(i).map_or(0, |m| m.0)
    }

    /// True when every code point maps to a real glyph whose outline is
    /// non-empty, or empty for a whitespace character.
    pub fn covers(&self, cps: &BTreeSet<Codepoint>) -> bool {
        cps.iter().all(|&cp| match self.glyph_for(cp) {
            Ok(g) => !g.is_empty() || cp.as_char().is_whitespace(),
            Err(_) => false,
        })
    }

    fn glyph_data(&self, gid: u16) -> Result<&[u8]> {
        let i = gid as usize;
        if i + 1 >= self.loca.len() {
            return Err(Error::MalformedFont(format!("glyph {gid} out of range")));
        }
        let (start, end) = (self.loca[i] as usize, self.loca[i + 1] as usize);
        if start > end || self.glyf.start + end > self.glyf.end {
            return Err(Error::MalformedFont(format!("bad loca entry for glyph {gid}")));
        }
        Ok(&self.data[self.glyf.start + start..self.glyf.start + end])
    }

    fn load_contours(&self, gid: u16, depth: usize, out: &mut Vec<Vec<AnchorPoint>>) -> Result<()> {
        if depth > MAX_COMPOSITE_DEPTH {
            return Err(Error::RecursionLimit(MAX_COMPOSITE_DEPTH));
        }
        let data = self.glyph_data(gid)?;
        if data.is_empty() {
            return Ok(());
        }
        let mut r = Reader::new(data);
        let n_contours = r.i16()?;
        r.skip(8)?;
        if n_contours >= 0 {
            parse_simple(&mut r, n_contours as usize, out)
        } else {
            self.parse_composite(&mut r, depth, out)
        }
    }

    fn parse_composite(
        &self,
        r: &mut Reader<'_>,
        depth: usize,
        out: &mut Vec<Vec<AnchorPoint>>,
    ) -> Result<()> {
        const ARG_1_AND_2_ARE_WORDS: u16 = 0x0001;
        const ARGS_ARE_XY_VALUES: u16 = 0x0002;
        const WE_HAVE_A_SCALE: u16 = 0x0008;
        const MORE_COMPONENTS: u16 = 0x0020;
        const WE_HAVE_AN_X_AND_Y_SCALE: u16 = 0x0040;
        const WE_HAVE_A_TWO_BY_TWO: u16 = 0x0080;
        const SCALED_COMPONENT_OFFSET: u16 = 0x0800;

        loop {
            let flags = r.u16()?;
            let child = r.u16()?;
            if child >= self.glyph_count {
                return Err(Error::MalformedFont(format!("component glyph {child} out of range")));
            }
            let (a1, a2) = if flags & ARG_1_AND_2_ARE_WORDS != 0 {
                (r.i16()? as f64, r.i16()? as f64)
            } else {
                (r.i8()? as f64, r.i8()? as f64)
            };
            if flags & ARGS_ARE_XY_VALUES == 0 {
                return Err(Error::UnsupportedOutlineFormat(
                    "point-matching composite components".into(),
                ));
            }
            // [xx, yx, xy, yy]: x' = xx*x + xy*y, y' = yx*x + yy*y
            let m = if flags & WE_HAVE_A_SCALE != 0 {
                let s = r.f2dot14()?;
                [s, 0.0, 0.0, s]
            } else if flags & WE_HAVE_AN_X_AND_Y_SCALE != 0 {
                let sx = r.f2dot14()?;
                let sy = r.f2dot14()?;
                [sx, 0.0, 0.0, sy]
            } else if flags & WE_HAVE_A_TWO_BY_TWO != 0 {
                [r.f2dot14()?, r.f2dot14()?, r.f2dot14()?, r.f2dot14()?]
            } else {
                [1.0, 0.0, 0.0, 1.0]
            };
            let (dx, dy) = if flags & SCALED_COMPONENT_OFFSET != 0 {
                (m[0] * a1 + m[2] * a2, m[1] * a1 + m[3] * a2)
            } else {
                (a1, a2)
            };

            let mut sub = Vec::new();
            self.load_contours(child, depth + 1, &mut sub)?;
            for c in sub {
                out.push(
                    c.into_iter()
                        .map(|p| AnchorPoint {
                            x: m[0] * p.x + m[2] * p.y + dx,
                            y: m[1] * p.x + m[3] * p.y + dy,
                            on_curve: p.on_curve,
                        })
                        .collect(),
                );
            }
            if flags & MORE_COMPONENTS == 0 {
                return Ok(());
            }
        }
    }
}

fn parse_simple(r: &mut Reader<'_>, n_contours: usize, out: &mut Vec<Vec<AnchorPoint>>) -> Result<()> {
    const ON_CURVE: u8 = 0x01;
    const X_SHORT: u8 = 0x02;
    const Y_SHORT: u8 = 0x04;
    const REPEAT: u8 = 0x08;
    const X_SAME_OR_POSITIVE: u8 = 0x10;
    const Y_SAME_OR_POSITIVE: u8 = 0x20;

    let mut ends = Vec::with_capacity(n_contours);
    for _ in 0..n_contours {
        ends.push(r.u16()? as usize);
    }
    if ends.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::MalformedFont("contour end points not increasing".into()));
    }
    let n_points = ends.last().map_or(0, |&e| e + 1);
    let instr_len = r.u16()? as usize;
    r.skip(instr_len)?;

    let mut flags = Vec::with_capacity(n_points);
    while flags.len() < n_points {
        let f = r.u8()?;
        flags.push(f);
        if f & REPEAT != 0 {
            let count = r.u8()?;
            for _ in 0..count {
                flags.push(f);
            }
        }
    }
    flags.truncate(n_points);

    let mut coords = |short: u8, same: u8| -> Result<Vec<f64>> {
        let mut v = Vec::with_capacity(n_points);
        let mut acc = 0i32;
        for &f in &flags {
            if f & short != 0 {
                let d = r.u8()? as i32;
                acc += if f & same != 0 { d } else { -d };
            } else if f & same == 0 {
                acc += r.i16()? as i32;
            }
            v.push(acc as f64);
        }
        Ok(v)
    };
    let xs = coords(X_SHORT, X_SAME_OR_POSITIVE)?;
    let ys = coords(Y_SHORT, Y_SAME_OR_POSITIVE)?;

    let mut start = 0;
    for &end in &ends {
        let contour = (start..=end)
            .map(|i| AnchorPoint {
                x: xs[i],
                y: ys[i],
                on_curve: flags[i] & ON_CURVE != 0,
            })
            .collect();
        out.push(contour);
        start = end + 1;
    }
    Ok(())
}

fn read_tables(data: &[u8]) -> Result<BTreeMap<[u8; 4], TableRecord>> {
    let mut r = Reader::new(data);
    let version = r.u32()?;
    match version {
        0x0001_0000 | 0x7472_7565 | 0x4F54_544F => {}
        0x7474_6366 => {
            return Err(Error::UnsupportedOutlineFormat("font collections".into()));
        }
        v => return Err(Error::MalformedFont(format!("unknown sfnt version {v:#010X}"))),
    }
    let num_tables = r.u16()? as usize;
    r.skip(6)?;
    let mut tables = BTreeMap::new();
    for _ in 0..num_tables {
        let tag: [u8; 4] = r.bytes(4)?.try_into().expect("4 bytes");
        let _checksum = r.u32()?;
        let offset = r.u32()? as usize;
        let length = r.u32()? as usize;
        if offset.checked_add(length).is_none_or(|end| end > data.len()) {
            return Err(Error::MalformedFont(format!(
                "table {} extends past end of file",
                String::from_utf8_lossy(&tag)
            )));
        }
        tables.insert(tag, TableRecord { offset, length });
    }
    Ok(tables)
}

fn table<'a>(data: &'a [u8], tables: &BTreeMap<[u8; 4], TableRecord>, tag: &[u8; 4]) -> Result<&'a [u8]> {
    let rec = tables.get(tag).ok_or_else(|| {
        Error::MalformedFont(format!("missing required table {}", String::from_utf8_lossy(tag)))
    })?;
    Ok(&data[rec.offset..rec.offset + rec.length])
}

/// Parses a TrueType font binary.
pub fn parse_font(bytes: &[u8]) -> Result<FontFace> {
    if bytes.is_empty() {
        return Err(Error::MalformedFont("empty input".into()));
    }
    let tables = read_tables(bytes)?;

    if !tables.contains_key(b"glyf") || !tables.contains_key(b"loca") {
        if tables.contains_key(b"CFF ") || tables.contains_key(b"CFF2") {
            return Err(Error::UnsupportedOutlineFormat("CFF outlines".into()));
        }
        return Err(Error::UnsupportedOutlineFormat("no glyf outline table".into()));
    }

    let mut head = Reader::new(table(bytes, &tables, b"head")?);
    head.skip(12)?;
    if head.u32()? != 0x5F0F_3CF5 {
        return Err(Error::MalformedFont("bad head magic number".into()));
    }
    head.skip(2)?;
    let units_per_em = head.u16()?;
    if units_per_em == 0 {
        return Err(Error::MalformedFont("units_per_em is zero".into()));
    }
    head.skip(30)?;
    let long_loca = match head.i16()? {
        0 => false,
        1 => true,
        v => return Err(Error::MalformedFont(format!("bad indexToLocFormat {v}"))),
    };

    let mut maxp = Reader::new(table(bytes, &tables, b"maxp")?);
    maxp.skip(4)?;
    let glyph_count = maxp.u16()?;
    if glyph_count == 0 {
        return Err(Error::MalformedFont("font has no glyphs".into()));
    }

    let mut hhea = Reader::new(table(bytes, &tables, b"hhea")?);
    hhea.skip(4)?;
    let ascender = hhea.i16()?.max(0);
    let descender = hhea.i16()?.min(0);
    hhea.skip(26)?;
    let n_hmetrics = hhea.u16()? as usize;
    if n_hmetrics == 0 {
        return Err(Error::MalformedFont("numberOfHMetrics is zero".into()));
    }

    let mut hmtx = Reader::new(table(bytes, &tables, b"hmtx")?);
    let mut hmetrics = Vec::with_capacity(n_hmetrics);
    for _ in 0..n_hmetrics.min(glyph_count as usize) {
        let adv = hmtx.u16()?;
        let lsb = hmtx.i16()?;
        hmetrics.push((adv, lsb));
    }

    let glyf_rec = tables[b"glyf"];
    let mut loca_r = Reader::new(table(bytes, &tables, b"loca")?);
    let mut loca = Vec::with_capacity(glyph_count as usize + 1);
    for _ in 0..=glyph_count {
        let off = if long_loca {
            loca_r.u32()?
        } else {
            loca_r.u16()? as u32 * 2
        };
        if off as usize > glyf_rec.length {
            return Err(Error::MalformedFont(format!("loca offset {off} past glyf table")));
        }
        loca.push(off);
    }

    let mut codepoint_map = parse_cmap(table(bytes, &tables, b"cmap")?)?;
    codepoint_map.retain(|_, g| *g != 0 && *g < glyph_count);

    let (family_name, style_name) = match tables.get(b"name") {
        Some(_) => parse_names(table(bytes, &tables, b"name")?)?,
        None => (String::new(), String::new()),
    };

    Ok(FontFace {
        data: Arc::from(bytes),
        units_per_em,
        family_name,
        style_name,
        ascender,
        descender,
        glyph_count,
        codepoint_map,
        hmetrics,
        loca,
        glyf: glyf_rec.offset..glyf_rec.offset + glyf_rec.length,
    })
}

fn parse_cmap(data: &[u8]) -> Result<BTreeMap<u32, u16>> {
    let mut r = Reader::new(data);
    r.skip(2)?;
    let n = r.u16()? as usize;
    let mut best: Option<(u8, usize)> = None;
    for _ in 0..n {
        let platform = r.u16()?;
        let encoding = r.u16()?;
        let offset = r.u32()? as usize;
        let format = Reader::at(data, offset)?.u16()?;
        let unicode = platform == 0 || (platform == 3 && (encoding == 1 || encoding == 10));
        let rank = match (unicode, format) {
            (true, 12) => 2,
            (true, 4) => 1,
            _ => continue,
        };
        if best.is_none_or(|(r, _)| rank > r) {
            best = Some((rank, offset));
        }
    }
    let (_, offset) = best.ok_or_else(|| {
        Error::UnsupportedOutlineFormat("no Unicode cmap subtable in format 4 or 12".into())
    })?;
    let mut sub = Reader::at(data, offset)?;
    match sub.u16()? {
        4 => cmap_format4(data, offset),
        _ => cmap_format12(data, offset),
    }
}

fn cmap_format4(data: &[u8], offset: usize) -> Result<BTreeMap<u32, u16>> {
    let mut r = Reader::at(data, offset + 6)?;
    let seg_count = r.u16()? as usize / 2;
    let ends_at = offset + 14;
    let starts_at = ends_at + seg_count * 2 + 2;
    let deltas_at = starts_at + seg_count * 2;
    let ranges_at = deltas_at + seg_count * 2;
    let mut map = BTreeMap::new();
    for i in 0..seg_count {
        let end = Reader::at(data, ends_at + 2 * i)?.u16()? as u32;
        let start = Reader::at(data, starts_at + 2 * i)?.u16()? as u32;
        let delta = Reader::at(data, deltas_at + 2 * i)?.u16()?;
        let range_pos = ranges_at + 2 * i;
        let range = Reader::at(data, range_pos)?.u16()? as usize;
        if start > end {
            return Err(Error::MalformedFont("cmap segment start after end".into()));
        }
        for c in start..=end {
            if c == 0xFFFF {
                continue;
            }
            let gid = if range == 0 {
                (c as u16).wrapping_add(delta)
            } else {
                let at = range_pos + range + 2 * (c - start) as usize;
                match Reader::at(data, at)?.u16()? {
                    0 => 0,
                    g => g.wrapping_add(delta),
                }
            };
            if gid != 0 {
                map.insert(c, gid);
            }
        }
    }
    Ok(map)
}

fn cmap_format12(data: &[u8], offset: usize) -> Result<BTreeMap<u32, u16>> {
    let mut r = Reader::at(data, offset + 12)?;
    let n_groups = r.u32()? as usize;
    let mut map = BTreeMap::new();
    for _ in 0..n_groups {
        let start = r.u32()?;
        let end = r.u32()?;
        let gid = r.u32()?;
        if start > end || end > 0x10FFFF {
            return Err(Error::MalformedFont("bad cmap format 12 group".into()));
        }
        for c in start..=end {
            let g = gid + (c - start);
            if g <= u16::MAX as u32 && g != 0 {
                map.insert(c, g as u16);
            }
        }
    }
    Ok(map)
}

fn parse_names(data: &[u8]) -> Result<(String, String)> {
    let mut r = Reader::new(data);
    r.skip(2)?;
    let count = r.u16()? as usize;
    let storage = r.u16()? as usize;
    // (rank, text) for family and style
    let mut found: [Option<(u8, String)>; 2] = [None, None];
    for _ in 0..count {
        let platform = r.u16()?;
        let encoding = r.u16()?;
        let language = r.u16()?;
        let name_id = r.u16()?;
        let length = r.u16()? as usize;
        let off = r.u16()? as usize;
        let slot = match name_id {
            1 => 0,
            2 => 1,
            _ => continue,
        };
        let raw = Reader::at(data, storage + off)?.bytes(length)?;
        let (rank, text) = match (platform, encoding) {
            (3, 1) | (3, 10) | (0, _) => {
                let units: Vec<u16> = raw
                    .chunks_exact(2)
                    .map(|c| u16::from_be_bytes([c[0], c[1]]))
                    .collect();
                let rank = if platform == 3 && language == 0x0409 { 3 } else { 2 };
                (rank, String::from_utf16_lossy(&units))
            }
            (1, 0) => (1, raw.iter().map(|&b| b as char).collect()),
            _ => continue,
        };
        if found[slot].as_ref().is_none_or(|(r, _)| rank > *r) {
            found[slot] = Some((rank, text));
        }
    }
    let [family, style] = found;
    Ok((
        family.map(|f| f.1).unwrap_or_default(),
        style.map(|s| s.1).unwrap_or_default(),
    ))
}

/// Convenience wrapper over [`FontFace::covers`].
pub fn coverage(face: &FontFace, cps: &BTreeSet<Codepoint>) -> bool {
    face.covers(cps)
}
