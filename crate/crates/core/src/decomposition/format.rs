//! Text form of a chain decomposition:
//!
//! ```text
//! decomposition length=4
//! level distance=1 code=universe:4
//! 0000
//! 1000
//! level distance=2
//! ...
//! ```
//!
//! Each `level` line is followed by that level's leaders, coordinate 1
//! first. The optional `code=` names the level's representative code, either
//! a built-in (see [`crate::codes::named_code`]) or a code file path relative
//! to the decomposition file; when given it must equal the code rebuilt from
//! the leaders.

use std::path::Path;

use super::chain::ChainDecomposition;
use crate::codes::{self, format_bits, parse_bits, Code};
use crate::error::{Error, Result};

impl ChainDecomposition {
    pub fn to_text(&self) -> String {
        let l = self.length();
        let mut out = format!("decomposition length={l}\n");
        for level in self.levels() {
            out.push_str(&format!("level distance={}\n", level.declared_distance));
            for &v in &level.leaders {
                out.push_str(&format_bits(v, l));
                out.push('\n');
            }
        }
        out
    }

    /// Parses the text form; `code=` references to files resolve against
    /// `base_dir` (the current directory when `None`).
    pub fn from_text(text: &str, base_dir: Option<&Path>) -> Result<ChainDecomposition> {
        let mut length = None;
        let mut levels: Vec<(Vec<u32>, u32, Option<(usize, String)>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            match fields.next() {
                Some("decomposition") => {
                    for f in fields {
                        match f.split_once('=') {
                            Some(("length", v)) => {
                                length = Some(v.parse::<usize>().map_err(|_| Error::parse(no, "bad length"))?)
                            }
                            _ => return Err(Error::parse(no, format!("unknown field {f:?}"))),
                        }
                    }
                }
                Some("level") => {
                    let mut distance = None;
                    let mut code = None;
                    for f in fields {
                        match f.split_once('=') {
                            Some(("distance", v)) => {
                                distance = Some(v.parse::<u32>().map_err(|_| Error::parse(no, "bad distance"))?)
                            }
                            Some(("code", v)) => code = Some((no, v.to_string())),
                            _ => return Err(Error::parse(no, format!("unknown field {f:?}"))),
                        }
                    }
                    let distance = distance.ok_or_else(|| Error::parse(no, "level needs distance="))?;
                    levels.push((Vec::new(), distance, code));
                }
                Some(_) => {
                    let l = length.ok_or_else(|| Error::parse(no, "leader before header"))?;
                    let current = levels
                        .last_mut()
                        .ok_or_else(|| Error::parse(no, "leader before the first level line"))?;
                    let (bits, len) =
                        parse_bits(line).ok_or_else(|| Error::parse(no, format!("bad leader {line:?}")))?;
                    if len != l {
                        return Err(Error::parse(no, format!("leader has {len} bits, expected {l}")));
                    }
                    current.0.push(bits);
                }
                None => {}
            }
        }
        let length = length.ok_or_else(|| Error::parse(1, "missing decomposition header"))?;
        let refs: Vec<Option<(usize, String)>> = levels.iter().map(|l| l.2.clone()).collect();
        let chain = ChainDecomposition::from_leaders(
            length,
            levels.into_iter().map(|(v, d, _)| (v, d)).collect(),
        )?;
        for (level, r) in chain.levels().iter().zip(refs) {
            let Some((no, name)) = r else { continue };
            let code = resolve_code(&name, base_dir).map_err(|e| Error::parse(no, e.to_string()))?;
            if code != level.code {
                return Err(Error::parse(no, format!("code {name:?} differs from the level's translates")));
            }
        }
        Ok(chain)
    }
}

fn resolve_code(name: &str, base_dir: Option<&Path>) -> Result<Code> {
    if let Ok(code) = codes::named_code(name) {
        return Ok(code);
    }
    let path = match base_dir {
        Some(dir) => dir.join(name),
        None => Path::new(name).to_path_buf(),
    };
    Code::from_text(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "\
decomposition length=4
level distance=1 code=universe:4
0000
1000
level distance=2 code=parity:4
0000
1010
1100
0110
level distance=4 code=repetition:4   # last level: its own words
0000
1111
";

    #[test]
    fn parses_and_round_trips() {
        let c = ChainDecomposition::from_text(EXAMPLE, None).unwrap();
        assert_eq!(c.parameters().levels, vec![(4, 1), (3, 2), (1, 4)]);
        let again = ChainDecomposition::from_text(&c.to_text(), None).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn code_reference_must_match() {
        let bad = EXAMPLE.replace("code=parity:4", "code=repetition:4");
        assert!(ChainDecomposition::from_text(&bad, None).is_err());
        let missing = EXAMPLE.replace("code=parity:4", "code=no-such-file.code");
        assert!(ChainDecomposition::from_text(&missing, None).is_err());
    }

    #[test]
    fn malformed_inputs() {
        assert!(ChainDecomposition::from_text("level distance=1\n0\n1\n", None).is_err());
        assert!(ChainDecomposition::from_text("decomposition length=1\n0\n", None).is_err());
        assert!(ChainDecomposition::from_text("decomposition length=2\nlevel\n00\n", None).is_err());
        assert!(ChainDecomposition::from_text("decomposition length=2\nlevel distance=1\n000\n", None).is_err());
    }
}
