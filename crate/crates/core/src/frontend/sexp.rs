//! S-expressions with source positions.

use crate::error::{Error, Result};

/// A 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s, _) => Some(s),
            Sexp::List(..) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items, _) => Some(items),
            Sexp::Atom(..) => None,
        }
    }

    /// The head symbol and the arguments of a list whose first item is an atom.
    pub fn call(&self) -> Option<(&str, &[Sexp])> {
        let items = self.list()?;
        Some((items.first()?.atom()?, &items[1..]))
    }
}

impl std::fmt::Display for Sexp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sexp::Atom(s, _) => f.write_str(s),
            Sexp::List(items, _) => {
                f.write_str("(")?;
                for (n, item) in items.iter().enumerate() {
                    if n > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub fn syntax(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

/// Reads every s-expression of `text`; `;` starts a comment running to the end of the line.
pub fn parse_sexps(text: &str) -> Result<Vec<Sexp>> {
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top = Vec::new();
    let mut chars = text.chars().peekable();
    let mut pos = Pos { line: 1, col: 1 };
    let advance = |c: char, pos: &mut Pos| {
        if c == '\n' {
            pos.line += 1;
            pos.col = 1;
        } else {
            pos.col += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let here = pos;
        match c {
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    advance(c, &mut pos);
                    chars.next();
                }
            }
            c if c.is_whitespace() => {
                advance(c, &mut pos);
                chars.next();
            }
            '(' => {
                advance(c, &mut pos);
                chars.next();
                stack.push((Vec::new(), here));
            }
            ')' => {
                advance(c, &mut pos);
                chars.next();
                let (items, start) = stack.pop().ok_or_else(|| syntax(here, "unbalanced `)`"))?;
                let e = Sexp::List(items, start);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(e),
                    None => top.push(e),
                }
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    advance(c, &mut pos);
                    chars.next();
                }
                let e = Sexp::Atom(s, here);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(e),
                    None => top.push(e),
                }
            }
        }
    }
    if let Some((_, start)) = stack.pop() {
        return Err(syntax(start, "unclosed `(`"));
    }
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_comments() {
        let es = parse_sexps("; header\n(assert (= x\n  y))").unwrap();
        assert_eq!(es.len(), 1);
        assert_eq!(es[0].pos(), Pos { line: 2, col: 1 });
        let (head, args) = es[0].call().unwrap();
        assert_eq!(head, "assert");
        assert_eq!(args[0].to_string(), "(= x y)");
    }

    #[test]
    fn unbalanced_input_is_located() {
        let Err(Error::Syntax { line, col, .. }) = parse_sexps("(a\n (b)") else { panic!() };
        assert_eq!((line, col), (1, 1));
        let Err(Error::Syntax { line, col, .. }) = parse_sexps("a)") else { panic!() };
        assert_eq!((line, col), (1, 2));
    }
}
