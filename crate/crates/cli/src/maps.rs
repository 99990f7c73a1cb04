//! Map specs for `dist`: a product of `id`, `T`, `T^m`, `U` and
//! `inv(<arc set>)` (the involution `T_A`), read as a composition with the
//! rightmost factor applied first.

use fullgroup::circle_maps::{ArcSet, PiecewiseRotation, RotationSystem};
use fullgroup::synthesis::GeneratorWord;

use crate::CliError;

/// Splits on whitespace outside brackets. Arcs are half-open, so `[` opens
/// a level that `)` may close.
fn factors(spec: &str) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for ch in spec.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(CliError::Usage(format!(
                "unbalanced closing bracket in `{spec}`"
            )));
        }
        if ch.is_whitespace() && depth == 0 {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(ch);
        }
    }
    if depth != 0 {
        return Err(CliError::Usage(format!(
            "unbalanced opening bracket in `{spec}`"
        )));
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

pub fn parse_map(
    spec: &str,
    system: &RotationSystem,
    default_circle: usize,
) -> Result<PiecewiseRotation, CliError> {
    let mut acc = system.identity();
    for f in factors(spec)? {
        let map = if let Some(inner) = f.strip_prefix("inv(").and_then(|s| s.strip_suffix(')')) {
            let set = ArcSet::parse(inner, system.circles(), default_circle)?;
            system.make_involution(&set)?
        } else {
            let word: GeneratorWord = f.parse()?;
            word.evaluate(system)
        };
        acc = acc.compose(&map)?;
    }
    Ok(acc)
}
