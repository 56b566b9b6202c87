//! Deterministic CSV and 16-bit PGM encoders.

use std::fmt::Write as _;

/// Formats a number with at most 9 significant digits, `.` as decimal separator and
/// no trailing zeros. Magnitudes outside `[1e-5, 1e16)` use exponent notation.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (9..=15).contains(&exp) {
        let rounded: f64 = sci.parse().expect("float");
        format!("{rounded:.0}")
    } else if (-5..=15).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// CSV document builder with LF line endings.
#[derive(Debug, Default)]
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn with_header(columns: &[&str]) -> Self {
        let mut c = Csv::default();
        c.buf.push_str(&columns.join(","));
        c.buf.push('\n');
        c
    }

    pub fn row<I, T>(&mut self, fields: I)
    where
        I: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let mut first = true;
        for f in fields {
            if !first {
                self.buf.push(',');
            }
            first = false;
            self.buf.push_str(f.as_ref());
        }
        self.buf.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf.into_bytes()
    }
}

pub const PGM_MAXVAL: u16 = 65535;

/// Binary (P5) 16-bit PGM of `values` (row-major, `width × height`), linearly mapped
/// from `[0, max]` onto `[0, 65535]`. `max` is recorded in a header comment so the
/// mapping can be inverted.
pub fn encode_pgm16(width: usize, height: usize, values: &[f64]) -> Vec<u8> {
    assert_eq!(values.len(), width * height, "pixel count mismatch");
    let max = values.iter().copied().fold(0.0f64, f64::max);
    let mut header = String::new();
    let _ = write!(
        header,
        "P5\n# max_value={}\n{width} {height}\n{PGM_MAXVAL}\n",
        format_number(max)
    );
    let mut out = header.into_bytes();
    out.reserve(values.len() * 2);
    for &v in values {
        out.extend_from_slice(&quantize(v, max).to_be_bytes());
    }
    out
}

/// Maps `v ∈ [0, max]` to a 16-bit level.
pub fn quantize(v: f64, max: f64) -> u16 {
    if max <= 0.0 || v <= 0.0 {
        return 0;
    }
    let level = (v / max * PGM_MAXVAL as f64).round();
    level.clamp(0.0, PGM_MAXVAL as f64) as u16
}

/// Decoded 16-bit PGM.
#[derive(Debug, Clone, PartialEq)]
pub struct Pgm16 {
    pub width: usize,
    pub height: usize,
    /// Value recorded in the `# max_value=` comment, if present.
    pub max_value: Option<f64>,
    pub levels: Vec<u16>,
}

/// Parses a P5 PGM with maxval 65535 as written by [`encode_pgm16`].
pub fn decode_pgm16(bytes: &[u8]) -> Option<Pgm16> {
    let mut pos = 0usize;
    let mut tokens: Vec<String> = Vec::new();
    let mut max_value = None;
    while tokens.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= bytes.len() {
            return None;
        }
        if bytes[pos] == b'#' {
            let end = bytes[pos..].iter().position(|&b| b == b'\n')? + pos;
            let comment = std::str::from_utf8(&bytes[pos + 1..end]).ok()?.trim();
            if let Some(v) = comment.strip_prefix("max_value=") {
                max_value = v.parse().ok();
            }
            pos = end + 1;
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        tokens.push(std::str::from_utf8(&bytes[start..pos]).ok()?.to_string());
    }
    pos += 1; // single whitespace after maxval
    if tokens[0] != "P5" || tokens[3] != "65535" {
        return None;
    }
    let width: usize = tokens[1].parse().ok()?;
    let height: usize = tokens[2].parse().ok()?;
    let data = bytes.get(pos..)?;
    if data.len() != width * height * 2 {
        return None;
    }
    let levels = data.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect();
    Some(Pgm16 {
        width,
        height,
        max_value,
        levels,
    })
}
