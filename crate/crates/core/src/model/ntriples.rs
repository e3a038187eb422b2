//! Loader for the N-Triples subset: IRIs, quoted strings, bare numerals.

use super::rdf::{is_numeral, NumericLiteral, RdfGraph, RdfTerm, Triple};
use super::LoadError;

pub fn load_ntriples(text: &str) -> Result<RdfGraph, LoadError> {
    let mut graph = RdfGraph::new();
    for (idx, line) in text.lines().enumerate() {
        let mut cur = Cursor::new(line, idx + 1);
        cur.skip_ws();
        if cur.at_end() || cur.peek() == Some('#') {
            continue;
        }
        let subject = match cur.term()? {
            RdfTerm::Iri(s) => s,
            _ => return Err(cur.error("subject must be an IRI")),
        };
        let predicate = match cur.term()? {
            RdfTerm::Iri(p) => p,
            _ => return Err(cur.error("predicate must be an IRI")),
        };
        let object = cur.term()?;
        cur.skip_ws();
        if !cur.eat('.') {
            return Err(cur.error("expected '.' terminating the triple"));
        }
        cur.skip_ws();
        if !(cur.at_end() || cur.peek() == Some('#')) {
            return Err(cur.error("unexpected content after '.'"));
        }
        graph.insert(Triple::new(subject, predicate, object));
    }
    Ok(graph)
}

struct Cursor<'a> {
    line: &'a str,
    pos: usize,
    line_no: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: &'a str, line_no: usize) -> Self {
        Self { line, pos: 0, line_no }
    }

    fn rest(&self) -> &'a str {
        &self.line[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.line.len()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c == ' ' || c == '\t') {
            self.pos += 1;
        }
    }

    fn col(&self) -> usize {
        self.line[..self.pos].chars().count() + 1
    }

    fn error(&self, message: &str) -> LoadError {
        LoadError::Syntax {
            line: self.line_no,
            col: self.col(),
            message: message.to_string(),
        }
    }

    fn term(&mut self) -> Result<RdfTerm, LoadError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => self.iri(),
            Some('"') => self.string(),
            Some('_') if self.rest().starts_with("_:") => Err(LoadError::Unsupported {
                line: self.line_no,
                feature: "blank node".into(),
            }),
            Some(_) => self.numeral(),
            None => Err(self.error("unexpected end of line")),
        }
    }

    fn iri(&mut self) -> Result<RdfTerm, LoadError> {
        self.bump();
        let start = self.pos;
        loop {
            match self.bump() {
                Some('>') => break,
                Some(c) if c.is_whitespace() || c == '<' || c == '"' => {
                    return Err(self.error("invalid character in IRI"))
                }
                Some(_) => {}
                None => return Err(self.error("unterminated IRI")),
            }
        }
        let iri = &self.line[start..self.pos - 1];
        if iri.is_empty() {
            return Err(self.error("empty IRI"));
        }
        Ok(RdfTerm::Iri(iri.to_string()))
    }

    fn string(&mut self) -> Result<RdfTerm, LoadError> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('"') => break,
                Some('\\') => {
                    let c = match self.bump() {
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('r') => '\r',
                        Some('"') => '"',
                        Some('\\') => '\\',
                        Some('u') => self.unicode_escape(4)?,
                        Some('U') => self.unicode_escape(8)?,
                        _ => return Err(self.error("invalid escape sequence")),
                    };
                    out.push(c);
                }
                Some(c) => out.push(c),
                None => return Err(self.error("unterminated string literal")),
            }
        }
        match self.peek() {
            Some('@') => Err(LoadError::Unsupported {
                line: self.line_no,
                feature: "language tag".into(),
            }),
            Some('^') => Err(LoadError::Unsupported {
                line: self.line_no,
                feature: "datatyped literal".into(),
            }),
            _ => Ok(RdfTerm::Str(out)),
        }
    }

    fn unicode_escape(&mut self, digits: usize) -> Result<char, LoadError> {
        let rest = self.rest();
        let hex = rest.get(..digits).ok_or_else(|| self.error("short unicode escape"))?;
        let code = u32::from_str_radix(hex, 16).map_err(|_| self.error("bad unicode escape"))?;
        self.pos += digits;
        char::from_u32(code).ok_or_else(|| self.error("invalid code point"))
    }

    fn numeral(&mut self) -> Result<RdfTerm, LoadError> {
        let rest = self.rest();
        let mut end = rest
            .find(|c: char| c.is_whitespace())
            .unwrap_or(rest.len());
        // `1.` at the end of a statement: the dot terminates the triple.
        if end == rest.len() && rest.ends_with('.') {
            end -= 1;
        }
        let token = &rest[..end];
        if !is_numeral(token) {
            return Err(self.error("expected IRI, string literal or numeral"));
        }
        let lit = NumericLiteral::parse(token).ok_or_else(|| self.error("numeral out of range"))?;
        self.pos += end;
        Ok(RdfTerm::Num(lit))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_string_triple() {
        let g = load_ntriples("<m> <v:name> \"marko\" .").unwrap();
        assert_eq!(g.len(), 1);
        let t = g.iter().next().unwrap();
        assert_eq!(t.object, RdfTerm::string("marko"));
    }

    #[test]
    fn empty_and_comment_only_input() {
        assert!(load_ntriples("").unwrap().is_empty());
        assert!(load_ntriples("# nothing\n\n   \n").unwrap().is_empty());
    }

    #[test]
    fn duplicates_collapse() {
        let g = load_ntriples("<m> <v:name> \"marko\" .\n<m> <v:name> \"marko\" .\n").unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn bare_numerals_are_numbers_quoted_are_strings() {
        let g = load_ntriples("<m> <v:age> 29 .\n<m> <v:code> \"29\" .\n<m> <v:w> 0.5.\n").unwrap();
        let objs: Vec<_> = g.iter().map(|t| t.object.clone()).collect();
        assert!(objs.contains(&RdfTerm::number("29")));
        assert!(objs.contains(&RdfTerm::string("29")));
        assert!(objs.contains(&RdfTerm::number("0.5")));
    }

    #[test]
    fn escapes_decode() {
        let g = load_ntriples(r#"<m> <v:q> "a\"b\\cé" ."#).unwrap();
        assert_eq!(g.iter().next().unwrap().object, RdfTerm::string("a\"b\\cé"));
    }

    #[test]
    fn malformed_line_cites_line_number() {
        let err = load_ntriples("<a> <b> <c> .\n<a> <b> oops .\n").unwrap_err();
        assert!(matches!(err, LoadError::Syntax { line: 2, .. }), "{err:?}");
        let err = load_ntriples("<a> <b> <c>").unwrap_err();
        assert!(matches!(err, LoadError::Syntax { line: 1, .. }));
        let err = load_ntriples("\"a\" <b> <c> .").unwrap_err();
        assert!(matches!(err, LoadError::Syntax { line: 1, col: 4, .. }), "{err:?}");
    }

    #[test]
    fn blank_nodes_are_unsupported() {
        let err = load_ntriples("_:b1 <v:name> \"x\" .").unwrap_err();
        assert_eq!(
            err,
            LoadError::Unsupported { line: 1, feature: "blank node".into() }
        );
        let err = load_ntriples("<a> <b> _:x .").unwrap_err();
        assert!(matches!(err, LoadError::Unsupported { .. }));
    }

    #[test]
    fn serialization_reloads_identically() {
        let text = "<a> <v:name> \"x\\ty\" .\n<a> <v:age> 0.50 .\n<a> <e:knows> <b> .\n";
        let g = load_ntriples(text).unwrap();
        assert_eq!(load_ntriples(&g.to_ntriples()).unwrap(), g);
    }
}
