//! Canonical text form of [`MechanismSpec`].
//!
//! ```text
//! median | order:<j> | dictator:<i> | opt | opt:<p> | lrm | threepoint:<q>
//! mixture:{dict:[w,..],order:[w,..],opt:w[,p:<p>]}
//! mirror(<spec>) | symmetrize(<spec>)
//! ```
//!
//! `Display` writes the canonical form and parsing accepts it back exactly.
//! Whitespace is ignored on input.

use std::fmt;
use std::str::FromStr;

use super::{MechanismSpec, Mixture};
use crate::error::{Error, Result};
use crate::model::PNorm;

impl fmt::Display for MechanismSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MechanismSpec::Median => f.write_str("median"),
            MechanismSpec::OrderStatistic(j) => write!(f, "order:{j}"),
            MechanismSpec::Dictator(i) => write!(f, "dictator:{i}"),
            MechanismSpec::Optimal(None) => f.write_str("opt"),
            MechanismSpec::Optimal(Some(p)) => write!(f, "opt:{p}"),
            MechanismSpec::Lrm => f.write_str("lrm"),
            MechanismSpec::ThreePoint(q) => write!(f, "threepoint:{q}"),
            MechanismSpec::Mirror(inner) => write!(f, "mirror({inner})"),
            MechanismSpec::Symmetrized(inner) => write!(f, "symmetrize({inner})"),
            MechanismSpec::Mixture(m) => {
                write!(
                    f,
                    "mixture:{{dict:[{}],order:[{}],opt:{}",
                    join(&m.dictator_weights),
                    join(&m.order_weights),
                    m.opt_weight
                )?;
                if let Some(p) = m.p {
                    write!(f, ",p:{p}")?;
                }
                f.write_str("}")
            }
        }
    }
}

fn join(ws: &[f64]) -> String {
    ws.iter()
        .map(|w| w.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl FromStr for MechanismSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut parser = Parser {
            text: &compact,
            pos: 0,
        };
        let spec = parser.spec()?;
        if parser.pos != compact.len() {
            return Err(parser.error("trailing input"));
        }
        spec.validate()?;
        Ok(spec)
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn error(&self, what: &str) -> Error {
        Error::Parse(format!(
            "{what} at offset {} in mechanism `{}`",
            self.pos, self.text
        ))
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    fn word(&mut self) -> &'a str {
        let rest = self.rest();
        let len = rest
            .find(|c: char| !c.is_ascii_alphabetic())
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    /// A number token: everything up to the next delimiter.
    fn token(&mut self) -> Result<&'a str> {
        let rest = self.rest();
        let len = rest.find([',', ']', '}', ')']).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected a value"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn real(&mut self) -> Result<f64> {
        let t = self.token()?;
        t.parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad number `{t}`")))
    }

    fn index(&mut self) -> Result<usize> {
        let t = self.token()?;
        t.parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad index `{t}`")))
    }

    fn norm(&mut self) -> Result<PNorm> {
        self.token()?.parse()
    }

    fn list(&mut self) -> Result<Vec<f64>> {
        self.expect("[")?;
        let mut out = Vec::new();
        if self.eat("]") {
            return Ok(out);
        }
        loop {
            out.push(self.real()?);
            if self.eat("]") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn spec(&mut self) -> Result<MechanismSpec> {
        let start = self.pos;
        let name = self.word().to_ascii_lowercase();
        match name.as_str() {
            "median" => Ok(MechanismSpec::Median),
            "lrm" => Ok(MechanismSpec::Lrm),
            "order" => {
                self.expect(":")?;
                Ok(MechanismSpec::OrderStatistic(self.index()?))
            }
            "dictator" => {
                self.expect(":")?;
                Ok(MechanismSpec::Dictator(self.index()?))
            }
            "opt" => {
                if self.eat(":") {
                    Ok(MechanismSpec::Optimal(Some(self.norm()?)))
                } else {
                    Ok(MechanismSpec::Optimal(None))
                }
            }
            "threepoint" => {
                self.expect(":")?;
                MechanismSpec::three_point(self.real()?)
            }
            "mirror" | "symmetrize" => {
                self.expect("(")?;
                let inner = self.spec()?;
                self.expect(")")?;
                Ok(if name == "mirror" {
                    inner.mirror()
                } else {
                    inner.symmetrize()
                })
            }
            "mixture" => {
                self.expect(":")?;
                self.mixture()
            }
            _ => {
                self.pos = start;
                Err(self.error("unknown mechanism"))
            }
        }
    }

    fn mixture(&mut self) -> Result<MechanismSpec> {
        self.expect("{")?;
        let (mut dict, mut order, mut opt, mut p) = (Vec::new(), Vec::new(), 0.0, None);
        if !self.eat("}") {
            loop {
                let key = self.word();
                self.expect(":")?;
                match key {
                    "dict" => dict = self.list()?,
                    "order" => order = self.list()?,
                    "opt" => opt = self.real()?,
                    "p" => p = Some(self.norm()?),
                    _ => return Err(self.error(&format!("unknown mixture key `{key}`"))),
                }
                if self.eat("}") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(MechanismSpec::Mixture(Mixture::new(dict, order, opt, p)?))
    }
}
