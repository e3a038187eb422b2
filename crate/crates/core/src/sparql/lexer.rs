use super::ast::Pos;
use super::SparqlError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Var(String),
    Iri(String),
    PName { prefix: String, local: String },
    Str(String),
    Num(String),
    Word(String),
    Punct(&'static str),
    BlankNode,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Var(v) => format!("variable ?{v}"),
            Tok::Iri(i) => format!("IRI <{i}>"),
            Tok::PName { prefix, local } => format!("prefixed name {prefix}:{local}"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Num(n) => format!("number {n}"),
            Tok::Word(w) => format!("'{w}'"),
            Tok::Punct(p) => format!("'{p}'"),
            Tok::BlankNode => "blank node".into(),
            Tok::Eof => "end of input".into(),
        }
    }

    pub(crate) fn is_word(&self, kw: &str) -> bool {
        matches!(self, Tok::Word(w) if w.eq_ignore_ascii_case(kw))
    }

    pub(crate) fn is_punct(&self, p: &str) -> bool {
        matches!(self, Tok::Punct(q) if *q == p)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

const PUNCT: [&str; 26] = [
    "&&", "||", "!=", "<=", ">=", "^^", "{", "}", "(", ")", ".", ";", ",", "*", "=", "<", ">", "!",
    "/", "|", "^", "+", "?", "[", "]", "@",
];

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_iri_char(c: char) -> bool {
    !(c.is_whitespace() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, SparqlError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, to: usize| {
        while *i < to {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            let to = i + 1;
            advance(&mut i, &mut line, &mut col, to);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                let to = i + 1;
            advance(&mut i, &mut line, &mut col, to);
            }
            continue;
        }
        let pos = Pos { line, col };
        let syntax = |message: String| SparqlError::Syntax {
            line: pos.line,
            col: pos.col,
            message,
            expected: Vec::new(),
        };
        let peek = |k: usize| chars.get(i + k).copied();

        // Variables.
        if (c == '?' || c == '$') && peek(1).is_some_and(is_name_char) {
            let mut j = i + 1;
            while j < chars.len() && is_name_char(chars[j]) {
                j += 1;
            }
            let name: String = chars[i + 1..j].iter().collect();
            advance(&mut i, &mut line, &mut col, j);
            out.push(Token { tok: Tok::Var(name), pos });
            continue;
        }
        // IRI reference, or a comparison operator when no closing '>' follows.
        if c == '<' {
            let mut j = i + 1;
            while j < chars.len() && is_iri_char(chars[j]) {
                j += 1;
            }
            if j < chars.len() && chars[j] == '>' && !(j == i + 1) {
                let iri: String = chars[i + 1..j].iter().collect();
                advance(&mut i, &mut line, &mut col, j + 1);
                out.push(Token { tok: Tok::Iri(iri), pos });
                continue;
            }
        }
        // String literals.
        if c == '"' || c == '\'' {
            let quote = c;
            let mut j = i + 1;
            let mut s = String::new();
            loop {
                let Some(&d) = chars.get(j) else {
                    return Err(syntax("unterminated string literal".into()));
                };
                if d == quote {
                    j += 1;
                    break;
                }
                if d == '\n' {
                    return Err(syntax("newline in string literal".into()));
                }
                if d == '\\' {
                    let e = chars.get(j + 1).copied();
                    s.push(match e {
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('r') => '\r',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        _ => return Err(syntax("invalid escape sequence in string".into())),
                    });
                    j += 2;
                    continue;
                }
                s.push(d);
                j += 1;
            }
            advance(&mut i, &mut line, &mut col, j);
            out.push(Token { tok: Tok::Str(s), pos });
            continue;
        }
        // Numbers, optionally signed.
        let signed = (c == '-' || c == '+') && peek(1).is_some_and(|d| d.is_ascii_digit());
        if c.is_ascii_digit() || signed {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E' || is_name_start(chars[j])) {
                return Err(syntax("malformed numeric literal".into()));
            }
            let num: String = chars[i..j].iter().collect();
            advance(&mut i, &mut line, &mut col, j);
            out.push(Token { tok: Tok::Num(num), pos });
            continue;
        }
        if c == '_' && peek(1) == Some(':') {
            let mut j = i + 2;
            while j < chars.len() && is_name_char(chars[j]) {
                j += 1;
            }
            advance(&mut i, &mut line, &mut col, j);
            out.push(Token { tok: Tok::BlankNode, pos });
            continue;
        }
        // Words and prefixed names.
        if is_name_start(c) || c == ':' {
            let mut j = i;
            while j < chars.len() && (is_name_char(chars[j]) || chars[j] == '-') {
                j += 1;
            }
            if j < chars.len() && chars[j] == ':' {
                let prefix: String = chars[i..j].iter().collect();
                j += 1;
                let start = j;
                while j < chars.len()
                    && (is_name_char(chars[j]) || matches!(chars[j], '-' | '.' | ':' | '%'))
                {
                    j += 1;
                }
                while j > start && chars[j - 1] == '.' {
                    j -= 1;
                }
                let local: String = chars[start..j].iter().collect();
                advance(&mut i, &mut line, &mut col, j);
                out.push(Token { tok: Tok::PName { prefix, local }, pos });
                continue;
            }
            if j > i {
                let word: String = chars[i..j].iter().collect();
                advance(&mut i, &mut line, &mut col, j);
                out.push(Token { tok: Tok::Word(word), pos });
                continue;
            }
        }
        let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        if let Some(p) = PUNCT.iter().find(|p| rest.starts_with(**p)) {
            let to = i + p.chars().count();
            advance(&mut i, &mut line, &mut col, to);
            out.push(Token { tok: Tok::Punct(p), pos });
            continue;
        }
        return Err(syntax(format!("unexpected character {c:?}")));
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn less_than_versus_iri() {
        assert_eq!(
            toks("?d < 30"),
            vec![Tok::Var("d".into()), Tok::Punct("<"), Tok::Num("30".into()), Tok::Eof]
        );
        assert_eq!(toks("?d<30")[1], Tok::Punct("<"));
        assert_eq!(toks("<http://x/y>")[0], Tok::Iri("http://x/y".into()));
        assert_eq!(toks("?a <= ?b")[1], Tok::Punct("<="));
    }

    #[test]
    fn prefixed_names_and_trailing_dot() {
        assert_eq!(
            toks("v:name ?x ."),
            vec![
                Tok::PName { prefix: "v".into(), local: "name".into() },
                Tok::Var("x".into()),
                Tok::Punct("."),
                Tok::Eof
            ]
        );
        assert_eq!(
            toks("e:knows."),
            vec![
                Tok::PName { prefix: "e".into(), local: "knows".into() },
                Tok::Punct("."),
                Tok::Eof
            ]
        );
        assert_eq!(toks("v:")[0], Tok::PName { prefix: "v".into(), local: "".into() });
    }

    #[test]
    fn numbers_strings_and_positions() {
        let t = tokenize("SELECT\n  ?x 0.8 -3 \"a\\\"b\" 'c'").unwrap();
        assert_eq!(t[1].pos.line, 2);
        assert_eq!(t[1].pos.col, 3);
        assert_eq!(t[2].tok, Tok::Num("0.8".into()));
        assert_eq!(t[3].tok, Tok::Num("-3".into()));
        assert_eq!(t[4].tok, Tok::Str("a\"b".into()));
        assert_eq!(t[5].tok, Tok::Str("c".into()));
    }

    #[test]
    fn lone_question_mark_is_punctuation() {
        assert_eq!(toks("e:knows? ?y")[1], Tok::Punct("?"));
    }

    #[test]
    fn comments_and_blank_nodes() {
        assert_eq!(toks("# hi\n_:b1"), vec![Tok::BlankNode, Tok::Eof]);
    }

    #[test]
    fn bad_input_is_a_syntax_error() {
        assert!(matches!(tokenize("\"open"), Err(SparqlError::Syntax { .. })));
        assert!(matches!(tokenize("%%"), Err(SparqlError::Syntax { .. })));
        assert!(matches!(tokenize("12abc"), Err(SparqlError::Syntax { .. })));
    }
}
