use super::{mask_elements, SetFamily, SetFamilyError};

/// Parses the line format: `m=<int>` (optionally followed by `complex`), then
/// one subset per line as element indices, `-` standing for the empty set.
///
/// Returns the family and whether the `complex` flag was present. Blank lines
/// and lines starting with `#` are skipped.
pub fn parse_family(text: &str) -> Result<(SetFamily, bool), SetFamilyError> {
    let perr = |line: usize, message: String| SetFamilyError::Parse { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| perr(1, "missing header".into()))?;
    let mut parts = header.split_whitespace();
    let m: usize = parts
        .next()
        .and_then(|p| p.strip_prefix("m="))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| perr(hline, format!("expected `m=<int>`, got {header:?}")))?;
    let complex = match parts.next() {
        None => false,
        Some("complex") => true,
        Some(other) => return Err(perr(hline, format!("unknown header flag {other:?}"))),
    };
    let mut f = SetFamily::empty(m)?;
    for (no, line) in lines {
        let mut mask = 0u32;
        if line != "-" {
            for tok in line.split_whitespace() {
                let e: usize = tok
                    .parse()
                    .map_err(|_| perr(no, format!("bad element {tok:?}")))?;
                if e >= m {
                    return Err(perr(no, format!("element {e} out of range for m={m}")));
                }
                mask |= 1 << e;
            }
        }
        f.insert(mask)?;
    }
    if complex && !f.is_downward_closed() {
        return Err(perr(hline, "family flagged `complex` is not downward closed".into()));
    }
    Ok((f, complex))
}

impl SetFamily {
    /// Writes the format read by [`parse_family`].
    pub fn to_text(&self, complex: bool) -> String {
        let mut out = format!("m={}", self.m());
        if complex {
            out.push_str(" complex");
        }
        out.push('\n');
        for a in self.members() {
            if a == 0 {
                out.push('-');
            } else {
                let els: Vec<String> = mask_elements(a).iter().map(|e| e.to_string()).collect();
                out.push_str(&els.join(" "));
            }
            out.push('\n');
        }
        out
    }
}
