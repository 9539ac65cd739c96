//! Plain-text code files: a `length=ℓ size=M` header followed by one
//! codeword per line, coordinate 1 first.

use super::{format_bits, parse_bits, Code};
use crate::error::{Error, Result};

impl Code {
    pub fn to_text(&self) -> String {
        let mut out = format!("length={} size={}\n", self.length(), self.size());
        for &w in self.words() {
            out.push_str(&format_bits(w, self.length()));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Code> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "empty code file"))?;
        let (length, size) = parse_header(hline, header)?;
        let mut words = Vec::with_capacity(size);
        for (no, line) in lines {
            let (bits, len) =
                parse_bits(line).ok_or_else(|| Error::parse(no, format!("not a codeword: {line:?}")))?;
            if len != length {
                return Err(Error::parse(no, format!("codeword has {len} bits, header says {length}")));
            }
            words.push(bits);
        }
        if words.len() != size {
            return Err(Error::parse(
                hline,
                format!("header declares {size} words, found {}", words.len()),
            ));
        }
        Code::from_words(length, words)
    }
}

pub(crate) fn parse_header(line_no: usize, header: &str) -> Result<(usize, usize)> {
    let mut length = None;
    let mut size = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, format!("malformed header field {field:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad number in {field:?}")))?;
        match key {
            "length" => length = Some(value),
            "size" => size = Some(value),
            _ => return Err(Error::parse(line_no, format!("unknown header key {key:?}"))),
        }
    }
    match (length, size) {
        (Some(l), Some(s)) => Ok((l, s)),
        _ => Err(Error::parse(line_no, "header needs length= and size=")),
    }
}
