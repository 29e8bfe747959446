//! A small expression language for states of the superaffine vertex algebra
//! and their Λ-brackets:
//!
//! ```text
//! top    := sum | "[" sum "," sum "]"
//! sum    := ["-"] term (("+" | "-") term)*
//! term   := ["{" scalar "}" ["*"]] factor
//! factor := name | "1" | ":" sum sum ":" | "T(" sum ")" | "S(" sum ")" | "(" sum ")"
//! ```
//!
//! `name` is a basis element (its odd generator), `1` the vacuum, `:a b:` the
//! normally ordered product, and `{…}` a scalar in the field of the algebra.

use thiserror::Error;

use sva_core::sva::{LambdaValue, State, Sva};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at byte {pos}: {msg}")]
pub struct ExprError {
    pub pos: usize,
    pub msg: String,
}

/// The value of a top-level expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    State(State),
    Bracket(LambdaValue),
}

impl Value {
    pub fn render(&self, sva: &Sva) -> String {
        match self {
            Value::State(s) => sva.render(s),
            Value::Bracket(b) => b.render(sva.names()),
        }
    }
}

const DELIMITERS: &str = ":()[]{},+-*";

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    sva: &'a Sva,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn name(&mut self) -> String {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let end = rest.find(|c: char| c.is_whitespace() || DELIMITERS.contains(c)).unwrap_or(rest.len());
        self.pos += end;
        rest[..end].to_string()
    }

    fn top(&mut self) -> Result<Value, ExprError> {
        let v = if self.eat('[') {
            let a = self.sum()?;
            self.expect(',')?;
            let b = self.sum()?;
            self.expect(']')?;
            Value::Bracket(self.sva.lambda_bracket(&a, &b))
        } else {
            Value::State(self.sum()?)
        };
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(v)
    }

    fn sum(&mut self) -> Result<State, ExprError> {
        let mut acc = if self.eat('-') { self.term()?.neg() } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<State, ExprError> {
        if self.eat('{') {
            let start = self.pos;
            let Some(len) = self.src[start..].find('}') else {
                return self.err("unterminated `{`");
            };
            let text = &self.src[start..start + len];
            let field = self.sva.algebra().field().clone();
            let c = field.parse(text).map_err(|e| ExprError { pos: start, msg: e.to_string() })?;
            self.pos = start + len + 1;
            self.eat('*');
            return Ok(self.factor()?.scale(&c));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<State, ExprError> {
        if self.eat(':') {
            let a = self.sum()?;
            let b = self.sum()?;
            self.expect(':')?;
            return Ok(self.sva.nop(&a, &b));
        }
        if self.eat('(') {
            let a = self.sum()?;
            self.expect(')')?;
            return Ok(a);
        }
        let at = self.pos;
        let name = self.name();
        if name.is_empty() {
            return self.err("expected a state");
        }
        if (name == "T" || name == "S") && self.eat('(') {
            let a = self.sum()?;
            self.expect(')')?;
            return Ok(if name == "T" { self.sva.apply_t(&a) } else { self.sva.apply_s(&a) });
        }
        if name == "1" {
            return Ok(State::vacuum());
        }
        self.sva.generator(&name).map_err(|e| ExprError { pos: at, msg: e.to_string() })
    }
}

pub fn evaluate(sva: &Sva, src: &str) -> Result<Value, ExprError> {
    Parser { src, pos: 0, sva }.top()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;
    use sva_core::instances::g_ell;
    use sva_core::Field;

    fn engine() -> Sva {
        let f = Field::with_params(&["l", "k"]);
        Sva::new(Arc::new(g_ell(&f, &f.sym("l"), "v")), f.sym("k"))
    }

    fn state(sva: &Sva, src: &str) -> State {
        match evaluate(sva, src).unwrap() {
            Value::State(s) => s,
            Value::Bracket(_) => panic!("expected a state"),
        }
    }

    #[test]
    fn products_and_derivations() {
        let sva = engine();
        let a = sva.generator("v_1").unwrap();
        let b = sva.generator("v^2").unwrap();
        assert_eq!(state(&sva, ":v_1 v^2:"), sva.nop(&a, &b));
        assert_eq!(state(&sva, "T(v_1) - S(S(v_1))"), sva.apply_t(&a).sub(&sva.apply_s(&sva.apply_s(&a))));
        let half = sva.algebra().field().parse("l/2").unwrap();
        assert_eq!(state(&sva, "{l/2}*v_1 + -v^2".replace("+ -", "-").as_str()), a.scale(&half).sub(&b));
        assert_eq!(state(&sva, ":v_1 :v^2 v_3::"), sva.nop(&a, &sva.nop(&b, &sva.generator("v_3").unwrap())));
        assert_eq!(state(&sva, "1"), State::vacuum());
    }

    #[test]
    fn brackets() {
        let sva = engine();
        let (a, b) = (sva.generator("v_2").unwrap(), sva.generator("v_3").unwrap());
        assert_eq!(evaluate(&sva, "[v_2, v_3]").unwrap(), Value::Bracket(sva.lambda_bracket(&a, &b)));
    }

    #[test]
    fn errors_are_positioned() {
        let sva = engine();
        assert_eq!(evaluate(&sva, "v_1 + w").unwrap_err().pos, 6);
        assert_eq!(evaluate(&sva, ":v_1 v_2").unwrap_err().msg, "expected `:`");
        assert!(evaluate(&sva, "{q}*v_1").unwrap_err().msg.contains("q"));
        assert!(evaluate(&sva, "v_1 )").is_err());
    }
}
