use std::fmt;
use std::str::FromStr;

use crate::circle_maps::{PiecewiseRotation, RotationSystem};

use super::SynthesisError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Token {
    /// `T^m`, `m != 0`.
    Rot(i64),
    /// The involution `U`.
    Inv,
}

/// A word `g_1 g_2 ... g_L` in `T^{±1}` and `U`, evaluated as
/// `g_1 ∘ g_2 ∘ ... ∘ g_L` (the rightmost letter acts first).
///
/// Always kept run-length canonical: no `T^0`, no two adjacent powers of
/// `T`, no `U U`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GeneratorWord {
    tokens: Vec<Token>,
}

impl GeneratorWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(tokens: impl IntoIterator<Item = Token>) -> Self {
        let mut w = Self::empty();
        for t in tokens {
            w.push(t);
        }
        w
    }

    pub fn rot(m: i64) -> Self {
        Self::new([Token::Rot(m)])
    }

    pub fn inv() -> Self {
        Self::new([Token::Inv])
    }

    /// Appends on the right, reducing against the last token.
    pub fn push(&mut self, token: Token) {
        match (self.tokens.last().copied(), token) {
            (_, Token::Rot(0)) => {}
            (Some(Token::Rot(a)), Token::Rot(b)) => {
                self.tokens.pop();
                if a + b != 0 {
                    self.tokens.push(Token::Rot(a + b));
                }
            }
            (Some(Token::Inv), Token::Inv) => {
                self.tokens.pop();
            }
            _ => self.tokens.push(token),
        }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    /// Length in the letters `T`, `T^-1`, `U`.
    pub fn letter_length(&self) -> u64 {
        self.tokens
            .iter()
            .map(|t| match t {
                Token::Rot(m) => m.unsigned_abs(),
                Token::Inv => 1,
            })
            .sum()
    }

    /// `self · other`.
    pub fn then(&self, other: &Self) -> Self {
        let mut w = self.clone();
        for &t in &other.tokens {
            w.push(t);
        }
        w
    }

    /// `T^k · self · T^-k`.
    pub fn conjugate(&self, k: i64) -> Self {
        Self::rot(k).then(self).then(&Self::rot(-k))
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.tokens.iter().rev().map(|t| match t {
            Token::Rot(m) => Token::Rot(-m),
            Token::Inv => Token::Inv,
        }))
    }

    /// Exact evaluation in `system`.
    pub fn evaluate(&self, system: &RotationSystem) -> PiecewiseRotation {
        let u = system.generator_u();
        let mut acc = system.identity();
        for t in &self.tokens {
            let g = match t {
                Token::Rot(m) => system.rotation(*m),
                Token::Inv => u.clone(),
            };
            acc = acc.compose(&g).expect("maps share the system");
        }
        acc
    }
}

/// `T^k · w · T^-k`, canonicalized.
pub fn conjugate_word(w: &GeneratorWord, k: i64) -> GeneratorWord {
    w.conjugate(k)
}

/// Exact evaluation of `w` in `system`.
pub fn evaluate(w: &GeneratorWord, system: &RotationSystem) -> PiecewiseRotation {
    w.evaluate(system)
}

impl fmt::Display for GeneratorWord {
    /// Space-separated `T`, `T^m`, `U`; the empty word is `id`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tokens.is_empty() {
            return write!(f, "id");
        }
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match t {
                Token::Rot(1) => write!(f, "T")?,
                Token::Rot(m) => write!(f, "T^{m}")?,
                Token::Inv => write!(f, "U")?,
            }
        }
        Ok(())
    }
}

impl FromStr for GeneratorWord {
    type Err = SynthesisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad =
            |tok: &str| SynthesisError::WordParse(format!("unexpected token `{tok}` in `{s}`"));
        let mut w = Self::empty();
        for tok in s.split_whitespace() {
            match tok {
                "id" => {}
                "U" => w.push(Token::Inv),
                "T" => w.push(Token::Rot(1)),
                _ => {
                    let exp = tok.strip_prefix("T^").ok_or_else(|| bad(tok))?;
                    let exp = exp.trim_start_matches('{').trim_end_matches('}');
                    w.push(Token::Rot(exp.parse().map_err(|_| bad(tok))?));
                }
            }
        }
        Ok(w)
    }
}
