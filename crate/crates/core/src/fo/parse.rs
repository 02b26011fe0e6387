//! Recursive-descent parser for the concrete formula syntax:
//!
//! ```text
//! formula := "exists" var "." formula | "forall" var "." formula | impl
//! impl    := disj [ "implies" impl ]
//! disj    := conj ("or" conj)*
//! conj    := lit ("and" lit)*
//! lit     := "not" lit | "(" formula ")" | atom
//! atom    := REL "(" var ("," var)* ")" | var "=" var
//! ```

use std::sync::Arc;

use super::{FoError, Formula, Var};
use crate::vocabulary::Vocabulary;

pub fn parse(text: &str, vocab: &Arc<Vocabulary>) -> Result<Formula, FoError> {
    let mut p = Parser {
        text,
        pos: 0,
        vocab,
    };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    vocab: &'a Vocabulary,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> FoError {
        FoError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len()
            && self.text.as_bytes()[self.pos].is_ascii_whitespace()
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> Result<(), FoError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let mut len = 0;
        for (i, c) in rest.char_indices() {
            let ok = if i == 0 {
                c.is_ascii_alphabetic() || c == '_'
            } else {
                c.is_ascii_alphanumeric() || c == '_' || c == '\''
            };
            if !ok {
                break;
            }
            len = i + c.len_utf8();
        }
        if len == 0 {
            None
        } else {
            let word = rest[..len].to_string();
            self.pos += len;
            Some(word)
        }
    }

    fn try_keyword(&mut self, kw: &str) -> bool {
        let save = self.pos;
        match self.ident() {
            Some(w) if w == kw => true,
            _ => {
                self.pos = save;
                false
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, FoError> {
        for (kw, exists) in [("exists", true), ("forall", false)] {
            if self.try_keyword(kw) {
                let var = self.variable()?;
                self.eat('.')?;
                let body = Box::new(self.formula()?);
                return Ok(if exists {
                    Formula::Exists(var, body)
                } else {
                    Formula::Forall(var, body)
                });
            }
        }
        self.implication()
    }

    fn implication(&mut self) -> Result<Formula, FoError> {
        let lhs = self.disjunction()?;
        if self.try_keyword("implies") {
            let rhs = self.implication()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, FoError> {
        let mut parts = vec![self.conjunction()?];
        while self.try_keyword("or") {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Formula, FoError> {
        let mut parts = vec![self.literal()?];
        while self.try_keyword("and") {
            parts.push(self.literal()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn literal(&mut self) -> Result<Formula, FoError> {
        if self.try_keyword("not") {
            return Ok(Formula::Not(Box::new(self.literal()?)));
        }
        if self.peek() == Some('(') {
            self.eat('(')?;
            let f = self.formula()?;
            self.eat(')')?;
            return Ok(f);
        }
        self.atom()
    }

    fn variable(&mut self) -> Result<Var, FoError> {
        let word = self.ident().ok_or_else(|| self.err("expected a variable"))?;
        if ["exists", "forall", "and", "or", "not", "implies"].contains(&word.as_str()) {
            return Err(self.err(&format!("keyword '{word}' used as a variable")));
        }
        Ok(word)
    }

    fn atom(&mut self) -> Result<Formula, FoError> {
        let word = self.ident().ok_or_else(|| self.err("expected an atom"))?;
        if self.peek() == Some('(') {
            let rel = self
                .vocab
                .relation_by_name(&word)
                .map_err(|_| FoError::UnknownRelation(word.clone()))?;
            self.eat('(')?;
            let mut args = vec![self.variable()?];
            while self.peek() == Some(',') {
                self.eat(',')?;
                args.push(self.variable()?);
            }
            self.eat(')')?;
            let want = self.vocab.relations[rel].arity;
            if args.len() != want {
                return Err(FoError::Arity {
                    relation: word,
                    want,
                    got: args.len(),
                });
            }
            return Ok(Formula::Atom { rel, args });
        }
        // equality: word is the left-hand variable
        if ["exists", "forall", "and", "or", "not", "implies"].contains(&word.as_str()) {
            return Err(self.err(&format!("keyword '{word}' used as a variable")));
        }
        self.eat('=')?;
        let rhs = self.variable()?;
        Ok(Formula::Eq(word, rhs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocabulary::preset;

    #[test]
    fn parse_examples() {
        let v = preset("graph").unwrap();
        let f = parse("exists x. exists y. E(x,y)", &v).unwrap();
        assert_eq!(
            f,
            Formula::Exists(
                "x".into(),
                Box::new(Formula::Exists(
                    "y".into(),
                    Box::new(Formula::Atom {
                        rel: 0,
                        args: vec!["x".into(), "y".into()]
                    })
                ))
            )
        );
        let f = parse("forall x. x = x", &v).unwrap();
        assert_eq!(
            f,
            Formula::Forall(
                "x".into(),
                Box::new(Formula::Eq("x".into(), "x".into()))
            )
        );
    }

    #[test]
    fn arity_and_name_errors() {
        let v = preset("graph").unwrap();
        assert!(matches!(parse("E(x)", &v), Err(FoError::Arity { .. })));
        assert!(matches!(
            parse("F(x,y)", &v),
            Err(FoError::UnknownRelation(_))
        ));
        assert!(matches!(parse("exists x. ", &v), Err(FoError::Syntax { .. })));
        assert!(matches!(parse("E(x,y) and", &v), Err(FoError::Syntax { .. })));
    }

    #[test]
    fn print_parse_roundtrip() {
        let v = preset("cnf2").unwrap();
        let texts = [
            "exists x. exists y. (R0(x, y) and not R2(y, x))",
            "forall x. (R1(x, x') implies (exists z. R0(x, z) or x = z'))",
            "not (exists u. R1(u, u))",
        ];
        for t in texts {
            let f = parse(t, &v).unwrap();
            let printed = f.display(&v).to_string();
            let f2 = parse(&printed, &v).unwrap();
            assert_eq!(f, f2, "{t} -> {printed}");
        }
    }
}
