use super::{Formula, Term};
use crate::error::{Error, Result};
use crate::word::valid_name;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    Quoted(Vec<String>),
    Dot,
    LParen,
    RParen,
    Amp,
    Bar,
    Arrow,
    Bang,
    Equals,
    NotEquals,
    Plus,
    Star,
    End,
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
}

fn lex(text: &str) -> Result<Lexed> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '.' => {
                i += 1;
                Tok::Dot
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '&' => {
                i += 1;
                Tok::Amp
            }
            '|' => {
                i += 1;
                Tok::Bar
            }
            '+' => {
                i += 1;
                Tok::Plus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '=' => {
                i += 1;
                Tok::Equals
            }
            '-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Arrow
            }
            '!' if bytes.get(i + 1) == Some(&b'=') => {
                i += 2;
                Tok::NotEquals
            }
            '!' => {
                i += 1;
                Tok::Bang
            }
            '\'' => {
                let close = text[i + 1..]
                    .find('\'')
                    .ok_or_else(|| syntax(text, start, "unterminated word constant"))?;
                let body = &text[i + 1..i + 1 + close];
                let mut gens = Vec::new();
                for g in body.split('.') {
                    let g = g.trim();
                    if !valid_name(g) {
                        return Err(syntax(
                            text,
                            start,
                            &format!("bad generator name `{g}` in word constant"),
                        ));
                    }
                    gens.push(g.to_string());
                }
                i += close + 2;
                Tok::Quoted(gens)
            }
            c if c.is_ascii_digit() => {
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..i]
                    .parse()
                    .map_err(|_| syntax(text, start, "numeral too large"))?;
                Tok::Num(n)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(text[start..i].to_string())
            }
            other => {
                return Err(syntax(
                    text,
                    start,
                    &format!("unexpected character `{other}`"),
                ))
            }
        };
        toks.push((tok, start));
    }
    toks.push((Tok::End, text.len()));
    Ok(Lexed { toks })
}

fn syntax(text: &str, pos: usize, msg: &str) -> Error {
    let before = &text[..pos.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before
        .rfind('\n')
        .map_or(before.chars().count(), |p| before[p + 1..].chars().count())
        + 1;
    Error::Syntax {
        line,
        col,
        msg: msg.to_string(),
    }
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    i: usize,
}

/// Parses a formula in the text grammar:
///
/// ```text
/// f  ::= "A" var "." f | "E" var "." f | "(" f op f ")" | "!" f | t "=" t
/// op ::= "&" | "|" | "->"
/// t  ::= atom ("." atom)*
/// atom ::= var | "'" gen ("." gen)* "'" | "1"
/// ```
///
/// Extensions: `t != t`, a parenthesized single formula, chains of one
/// associative operator such as `(a & b & c)` (left-nested), and the
/// arithmetic terms `+`, `*`, numerals and parentheses.
pub fn parse(text: &str) -> Result<Formula> {
    let lexed = lex(text)?;
    let mut p = Parser {
        text,
        toks: lexed.toks,
        i: 0,
    };
    let f = p.formula()?;
    if p.peek() != &Tok::End {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err(&self, msg: &str) -> Error {
        let pos = self.toks[self.i].1;
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            _ => format!("`{}`", self.text[pos..].chars().next().unwrap_or(' ')),
        };
        syntax(self.text, pos, &format!("{msg} (found {found})"))
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        if let Tok::Ident(q) = self.peek().clone() {
            if (q == "A" || q == "E")
                && matches!(self.peek_at(1), Tok::Ident(_))
                && *self.peek_at(2) == Tok::Dot
            {
                self.bump();
                let v = match self.bump() {
                    Tok::Ident(v) => v,
                    _ => unreachable!(),
                };
                if v == "A" || v == "E" {
                    return Err(self.err("`A` and `E` are reserved"));
                }
                self.bump();
                let body = self.formula()?;
                return Ok(if q == "A" {
                    Formula::Forall(v, Box::new(body))
                } else {
                    Formula::Exists(v, Box::new(body))
                });
            }
        }
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::Not(Box::new(self.formula()?)))
            }
            Tok::LParen => {
                let save = self.i;
                match self.paren_formula() {
                    Ok(f) => Ok(f),
                    Err(first) => {
                        self.i = save;
                        self.equation().map_err(|second| furthest(first, second))
                    }
                }
            }
            _ => self.equation(),
        }
    }

    fn paren_formula(&mut self) -> Result<Formula> {
        self.expect(Tok::LParen, "`(`")?;
        let mut f = self.formula()?;
        let op = match self.peek() {
            Tok::RParen => {
                self.bump();
                return Ok(f);
            }
            Tok::Amp | Tok::Bar | Tok::Arrow => self.bump(),
            _ => return Err(self.err("expected `&`, `|`, `->` or `)`")),
        };
        loop {
            let g = self.formula()?;
            f = match op {
                Tok::Amp => Formula::And(Box::new(f), Box::new(g)),
                Tok::Bar => Formula::Or(Box::new(f), Box::new(g)),
                _ => Formula::Implies(Box::new(f), Box::new(g)),
            };
            match self.peek() {
                Tok::RParen => {
                    self.bump();
                    return Ok(f);
                }
                t if *t == op && op != Tok::Arrow => {
                    self.bump();
                }
                Tok::Amp | Tok::Bar | Tok::Arrow => {
                    return Err(self.err("mixed connectives need parentheses"));
                }
                _ => return Err(self.err("expected `)`")),
            }
        }
    }

    fn equation(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        match self.peek() {
            Tok::Equals => {
                self.bump();
                Ok(Formula::Eq(lhs, self.term()?))
            }
            Tok::NotEquals => {
                self.bump();
                Ok(Formula::Not(Box::new(Formula::Eq(lhs, self.term()?))))
            }
            _ => Err(self.err("expected `=`")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = self.product()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let r = self.product()?;
            t = Term::Plus(Box::new(t), Box::new(r));
        }
        Ok(t)
    }

    fn product(&mut self) -> Result<Term> {
        let mut t = self.concat()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let r = self.concat()?;
            t = Term::Times(Box::new(t), Box::new(r));
        }
        Ok(t)
    }

    fn concat(&mut self) -> Result<Term> {
        let mut t = self.atom()?;
        while *self.peek() == Tok::Dot {
            self.bump();
            let r = self.atom()?;
            t = Term::Concat(Box::new(t), Box::new(r));
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Ident(v) => {
                if v == "A" || v == "E" {
                    return Err(self.err("`A` and `E` are reserved"));
                }
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Num(1) => {
                self.bump();
                Ok(Term::Unit)
            }
            Tok::Num(n) => {
                self.bump();
                Ok(Term::Num(n))
            }
            Tok::Quoted(g) => {
                self.bump();
                Ok(Term::Word(g))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

/// Of two alternative parse errors, keep the one that got further.
fn furthest(a: Error, b: Error) -> Error {
    match (&a, &b) {
        (
            Error::Syntax {
                line: la, col: ca, ..
            },
            Error::Syntax {
                line: lb, col: cb, ..
            },
        ) => {
            if (la, ca) >= (lb, cb) {
                a
            } else {
                b
            }
        }
        _ => a,
    }
}
