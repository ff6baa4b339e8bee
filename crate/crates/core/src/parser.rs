//! Text format for reaction networks.
//!
//! ```text
//! species: X1 X2 X3     # optional declaration; otherwise inferred
//! input: X1             # optional, defaults to the first species
//! output: X3            # optional, defaults to the last species
//! X1 + X2 -> 0          # one reaction per line, `0` is the empty complex
//! 2X1 <-> X2 ; kf, kr   # reversible pair with rate bindings
//! 0 -> X1 ; zeta        # the reserved name `zeta` flags the input rate
//! X1 -> 0 ; k=1.5       # `name=value` binds a numeric rate value
//! ```
//!
//! `#` starts a comment. Coefficients may be written `2X1` or `2 X1`;
//! coefficient 1 is implicit. `parse_network` followed by `format_network`
//! reproduces the canonical form exactly.

use std::collections::BTreeSet;

use crate::error::{CrnError, Result};
use crate::model::{Complex, RateSymbol, RawReaction, ReactionNetwork, INPUT_RATE_NAME};

/// Parse the text form into a canonical [`ReactionNetwork`].
pub fn parse_network(text: &str) -> Result<ReactionNetwork> {
    let mut declared: Option<Vec<String>> = None;
    let mut input_name: Option<String> = None;
    let mut output_name: Option<String> = None;
    let mut reaction_lines: Vec<(usize, RawLine)> = Vec::new();

    for (lineno, raw_line) in text.lines().enumerate() {
        let line = strip_comment(raw_line).trim();
        if line.is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        if let Some(rest) = line.strip_prefix("species:") {
            if declared.is_some() {
                return Err(CrnError::parse(lineno, 1, "duplicate species declaration"));
            }
            let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if names.is_empty() {
                return Err(CrnError::parse(lineno, 1, "empty species declaration"));
            }
            declared = Some(names);
        } else if let Some(rest) = line.strip_prefix("input:") {
            if input_name.is_some() {
                return Err(CrnError::parse(lineno, 1, "duplicate input designation"));
            }
            input_name = Some(single_name(rest, lineno)?);
        } else if let Some(rest) = line.strip_prefix("output:") {
            if output_name.is_some() {
                return Err(CrnError::parse(lineno, 1, "duplicate output designation"));
            }
            output_name = Some(single_name(rest, lineno)?);
        } else {
            reaction_lines.push((lineno, parse_reaction_line(line, lineno)?));
        }
    }

    // Species resolution: declaration wins, else first-appearance order.
    let names: Vec<String> = match &declared {
        Some(names) => names.clone(),
        None => {
            let mut names = Vec::new();
            let mut seen = BTreeSet::new();
            let mut push = |n: &str| {
                if seen.insert(n.to_string()) {
                    names.push(n.to_string());
                }
            };
            for (_, line) in &reaction_lines {
                for term in line.left.iter().chain(line.right.iter()) {
                    push(&term.1);
                }
            }
            if let Some(n) = &input_name {
                push(n);
            }
            if let Some(n) = &output_name {
                push(n);
            }
            names
        }
    };
    let index_of = |name: &str, lineno: usize| -> Result<usize> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CrnError::parse(lineno, 1, format!("unknown species `{name}`")))
    };

    let to_complex = |terms: &[(u32, String)], lineno: usize| -> Result<Complex> {
        let mut coeffs = vec![0u32; names.len()];
        for (c, name) in terms {
            let idx = index_of(name, lineno)?;
            coeffs[idx] += c;
        }
        Ok(Complex::new(coeffs))
    };

    let mut raw = Vec::new();
    let mut seen_pairs: BTreeSet<(Vec<u32>, Vec<u32>)> = BTreeSet::new();
    let mut zeta_seen = false;
    for (lineno, line) in &reaction_lines {
        let source = to_complex(&line.left, *lineno)?;
        let target = to_complex(&line.right, *lineno)?;
        if source == target {
            return Err(CrnError::parse(
                *lineno,
                1,
                "trivial reaction: source equals target",
            ));
        }
        let mut push = |src: Complex, tgt: Complex, rate: RateSymbol| -> Result<()> {
            if !seen_pairs.insert((src.coeffs().to_vec(), tgt.coeffs().to_vec())) {
                return Err(CrnError::parse(*lineno, 1, "duplicate reaction"));
            }
            if rate.is_input {
                if zeta_seen {
                    return Err(CrnError::parse(
                        *lineno,
                        1,
                        "more than one rate flagged as the input parameter",
                    ));
                }
                zeta_seen = true;
            }
            raw.push(RawReaction::new(src, tgt, rate));
            Ok(())
        };
        match line.arrow {
            Arrow::Forward => {
                let rate = line
                    .rates
                    .first()
                    .cloned()
                    .unwrap_or_else(RateSymbol::anonymous);
                if line.rates.len() > 1 {
                    return Err(CrnError::parse(
                        *lineno,
                        1,
                        "an irreversible reaction takes a single rate",
                    ));
                }
                push(source, target, rate)?;
            }
            Arrow::Reversible => {
                if line.rates.len() > 2 {
                    return Err(CrnError::parse(
                        *lineno,
                        1,
                        "a reversible reaction takes at most two rates",
                    ));
                }
                let fwd = line
                    .rates
                    .first()
                    .cloned()
                    .unwrap_or_else(RateSymbol::anonymous);
                let rev = line
                    .rates
                    .get(1)
                    .cloned()
                    .unwrap_or_else(RateSymbol::anonymous);
                push(source.clone(), target.clone(), fwd)?;
                push(target, source, rev)?;
            }
        }
    }

    let input = match &input_name {
        Some(n) => Some(
            index_of(n, 0)
                .map_err(|_| CrnError::Invalid(format!("input species `{n}` not found")))?,
        ),
        None => None,
    };
    let output = match &output_name {
        Some(n) => Some(
            index_of(n, 0)
                .map_err(|_| CrnError::Invalid(format!("output species `{n}` not found")))?,
        ),
        None => None,
    };

    ReactionNetwork::new(names, raw, input, output)
}

/// Canonical text form; `parse_network(format_network(net)) == net`.
pub fn format_network(net: &ReactionNetwork) -> String {
    let mut out = String::new();
    out.push_str("species:");
    for s in net.species() {
        out.push(' ');
        out.push_str(&s.name);
    }
    out.push('\n');
    out.push_str(&format!(
        "input: {}\n",
        net.species()[net.input_species()].name
    ));
    out.push_str(&format!(
        "output: {}\n",
        net.species()[net.output_species()].name
    ));
    for (i, r) in net.reactions().iter().enumerate() {
        if let Some(j) = r.pair {
            if j < i {
                continue; // printed with its partner
            }
            out.push_str(&format!(
                "{} <-> {} ; {}, {}\n",
                format_complex(&r.source, net),
                format_complex(&r.target, net),
                format_rate(&r.rate),
                format_rate(&net.reactions()[j].rate),
            ));
        } else {
            out.push_str(&format!(
                "{} -> {} ; {}\n",
                format_complex(&r.source, net),
                format_complex(&r.target, net),
                format_rate(&r.rate),
            ));
        }
    }
    out
}

/// Render a complex as in the text format, e.g. `X1 + 2X2` or `0`.
pub fn format_complex(c: &Complex, net: &ReactionNetwork) -> String {
    if c.is_empty_complex() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (i, &coeff) in c.coeffs().iter().enumerate() {
        if coeff == 0 {
            continue;
        }
        let name = &net.species()[i].name;
        if coeff == 1 {
            parts.push(name.clone());
        } else {
            parts.push(format!("{coeff}{name}"));
        }
    }
    parts.join(" + ")
}

fn format_rate(r: &RateSymbol) -> String {
    match r.value {
        Some(v) => format!("{}={}", r.name, v),
        None => r.name.clone(),
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn single_name(rest: &str, lineno: usize) -> Result<String> {
    let mut parts = rest.split_whitespace();
    let name = parts
        .next()
        .ok_or_else(|| CrnError::parse(lineno, 1, "expected a species name"))?;
    if parts.next().is_some() {
        return Err(CrnError::parse(lineno, 1, "expected a single species name"));
    }
    Ok(name.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Arrow {
    Forward,
    Reversible,
}

struct RawLine {
    left: Vec<(u32, String)>,
    right: Vec<(u32, String)>,
    arrow: Arrow,
    rates: Vec<RateSymbol>,
}

fn parse_reaction_line(line: &str, lineno: usize) -> Result<RawLine> {
    let (body, rates_text) = match line.find(';') {
        Some(pos) => (&line[..pos], Some(&line[pos + 1..])),
        None => (line, None),
    };
    let (left_text, right_text, arrow) = if let Some(pos) = body.find("<->") {
        (&body[..pos], &body[pos + 3..], Arrow::Reversible)
    } else if let Some(pos) = body.find("->") {
        (&body[..pos], &body[pos + 2..], Arrow::Forward)
    } else {
        return Err(CrnError::parse(
            lineno,
            1,
            "expected `->` or `<->` in reaction line",
        ));
    };
    let left = parse_complex_text(left_text, lineno, 1)?;
    let col_right = left_text.len() + if arrow == Arrow::Reversible { 4 } else { 3 };
    let right = parse_complex_text(right_text, lineno, col_right)?;
    let rates = match rates_text {
        Some(t) => parse_rates(t, lineno)?,
        None => Vec::new(),
    };
    Ok(RawLine {
        left,
        right,
        arrow,
        rates,
    })
}

fn parse_complex_text(text: &str, lineno: usize, col0: usize) -> Result<Vec<(u32, String)>> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(CrnError::parse(lineno, col0, "empty complex"));
    }
    if trimmed == "0" {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    for part in trimmed.split('+') {
        let term = part.trim();
        if term.is_empty() {
            return Err(CrnError::parse(lineno, col0, "empty term in complex"));
        }
        terms.push(parse_term(term, lineno, col0)?);
    }
    Ok(terms)
}

fn parse_term(term: &str, lineno: usize, col: usize) -> Result<(u32, String)> {
    let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
    let rest = term[digits.len()..].trim_start();
    let coeff = if digits.is_empty() {
        1
    } else {
        digits
            .parse::<u32>()
            .map_err(|_| CrnError::parse(lineno, col, format!("bad coefficient `{digits}`")))?
    };
    if coeff == 0 {
        return Err(CrnError::parse(
            lineno,
            col,
            "zero coefficient in a nonempty complex",
        ));
    }
    if rest.is_empty() {
        return Err(CrnError::parse(
            lineno,
            col,
            format!("expected a species name in term `{term}`"),
        ));
    }
    if !is_identifier(rest) {
        return Err(CrnError::parse(
            lineno,
            col,
            format!("invalid species name `{rest}`"),
        ));
    }
    Ok((coeff, rest.to_string()))
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_rates(text: &str, lineno: usize) -> Result<Vec<RateSymbol>> {
    let mut rates = Vec::new();
    for part in text.split(',') {
        let spec = part.trim();
        if spec.is_empty() {
            return Err(CrnError::parse(lineno, 1, "empty rate specification"));
        }
        let rate = if let Some(eq) = spec.find('=') {
            let name = spec[..eq].trim();
            let value_text = spec[eq + 1..].trim();
            if !is_identifier(name) {
                return Err(CrnError::parse(
                    lineno,
                    1,
                    format!("invalid rate name `{name}`"),
                ));
            }
            let value: f64 = value_text.parse().map_err(|_| {
                CrnError::parse(lineno, 1, format!("bad rate value `{value_text}`"))
            })?;
            if !(value > 0.0) {
                return Err(CrnError::parse(
                    lineno,
                    1,
                    format!("rate value must be positive, got {value}"),
                ));
            }
            let mut r = RateSymbol::with_value(name, value);
            r.is_input = name == INPUT_RATE_NAME;
            r
        } else if is_identifier(spec) {
            let mut r = RateSymbol::named(spec);
            r.is_input = spec == INPUT_RATE_NAME;
            r
        } else if let Ok(value) = spec.parse::<f64>() {
            if !(value > 0.0) {
                return Err(CrnError::parse(
                    lineno,
                    1,
                    format!("rate value must be positive, got {value}"),
                ));
            }
            let mut r = RateSymbol::anonymous();
            r.value = Some(value);
            r
        } else {
            return Err(CrnError::parse(
                lineno,
                1,
                format!("bad rate specification `{spec}`"),
            ));
        };
        rates.push(rate);
    }
    Ok(rates)
}
