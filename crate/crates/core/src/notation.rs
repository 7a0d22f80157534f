//! Text form of cycles and complexes.
//!
//! ```text
//! CYCLE   := "(" INT (":" INT)+ ")"
//! COMPLEX := "{" CYCLE ("," CYCLE)* "}"
//! INT     := decimal >= 1
//! ```
//!
//! Whitespace is ignored everywhere. Entry order is preserved by the raw parsers;
//! canonicalization happens in [`crate::cycle`].

use std::fmt;

use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.err(format!("expected '{}', found '{}'", c as char, x as char)),
            None => self.err(format!("expected '{}', found end of input", c as char)),
        }
    }

    fn int(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a positive integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value: u32 = match text.parse() {
            Ok(v) => v,
            Err(_) => {
                self.pos = start;
                return self.err("integer out of range");
            }
        };
        if value == 0 {
            self.pos = start;
            return self.err("entries must be at least 1");
        }
        Ok(value)
    }

    fn cycle(&mut self) -> Result<Vec<u32>> {
        self.expect(b'(')?;
        let mut parts = vec![self.int()?];
        loop {
            match self.peek() {
                Some(b':') => {
                    self.pos += 1;
                    parts.push(self.int()?);
                }
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                _ => return self.err("expected ':' or ')'"),
            }
        }
        if parts.len() < 2 {
            return self.err("a cycle needs at least two entries");
        }
        Ok(parts)
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => self.err("trailing input"),
        }
    }
}

pub fn parse_raw_cycle(s: &str) -> Result<Vec<u32>> {
    let mut cur = Cursor::new(s);
    let parts = cur.cycle()?;
    cur.finish()?;
    Ok(parts)
}

/// Parses a complex, returning each cycle with the byte offset it starts at.
pub fn parse_raw_complex(s: &str) -> Result<Vec<(usize, Vec<u32>)>> {
    let mut cur = Cursor::new(s);
    cur.expect(b'{')?;
    let mut out = Vec::new();
    loop {
        cur.skip_ws();
        let at = cur.pos;
        out.push((at, cur.cycle()?));
        match cur.peek() {
            Some(b',') => cur.pos += 1,
            Some(b'}') => {
                cur.pos += 1;
                break;
            }
            _ => return cur.err("expected ',' or '}'"),
        }
    }
    cur.finish()?;
    Ok(out)
}

/// Removes the `\!` spacing commands found in typeset cycle tables.
pub fn strip_table_artifacts(s: &str) -> String {
    s.replace("\\!", "").replace('$', "")
}

pub(crate) fn write_parts(f: &mut fmt::Formatter<'_>, parts: &[u32]) -> fmt::Result {
    f.write_str("(")?;
    for (i, a) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(":")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

/// Renders raw entry sequences without canonicalizing them.
pub fn format_raw_complex(cycles: &[Vec<u32>]) -> String {
    let body: Vec<String> = cycles
        .iter()
        .map(|p| {
            let inner: Vec<String> = p.iter().map(|a| a.to_string()).collect();
            format!("({})", inner.join(":"))
        })
        .collect();
    format!("{{{}}}", body.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_parsing_keeps_order() {
        assert_eq!(parse_raw_cycle("(5:2:5:2)").unwrap(), vec![5, 2, 5, 2]);
        let c = parse_raw_complex("{(2:1:1:5), (1:1:5:2)}").unwrap();
        assert_eq!(c[0].1, vec![2, 1, 1, 5]);
        assert_eq!(c[1].0, 12);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_raw_cycle("(1:2").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                pos: 4,
                msg: "expected ':' or ')'".into()
            }
        );
        assert!(matches!(parse_raw_cycle("(3)"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_raw_complex("{(1:2),}"),
            Err(Error::Parse { pos: 7, .. })
        ));
        assert!(matches!(
            parse_raw_complex("{}"),
            Err(Error::Parse { pos: 1, .. })
        ));
        assert!(matches!(
            parse_raw_cycle("(1:2) x"),
            Err(Error::Parse { pos: 6, .. })
        ));
    }

    #[test]
    fn strips_typesetting() {
        let s = strip_table_artifacts("$\\{(1\\!:\\!1\\!:\\!2\\!:\\!5)\\}$");
        assert_eq!(s, "\\{(1:1:2:5)\\}");
        assert_eq!(
            parse_raw_cycle(&strip_table_artifacts("(1\\!:\\!2\\!:\\!4)")).unwrap(),
            vec![1, 2, 4]
        );
        assert_eq!(format_raw_complex(&[vec![2, 1, 1, 5]]), "{(2:1:1:5)}");
    }
}
