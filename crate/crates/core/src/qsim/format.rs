//! Text format for query algorithms.
//!
//! ```text
//! # exact search on four positions
//! n 4
//! q 2
//! w 1
//! T 1
//! output pure
//! unitary 0
//! builtin shift-answer
//! builtin dft-answer
//! builtin dft-index
//! end
//! unitary 1
//! matrix
//! 1.0 0.0 0.0 0.0 ...
//! end
//! ```
//!
//! `output` is `pure`, `dephase-answer` or `keep <d1> <d2> ... : <k1> ...`
//! where the `k` are 1-based factor numbers. A `matrix` block lists one row
//! per line as real/imaginary pairs. Builtins apply in the listed order.

use num_complex::Complex64;

use super::algorithm::{OutputSpec, QueryAlgorithm, Step};
use super::gates::{CMatrix, Gate};
use super::QsimError;

fn err(line: usize, message: impl Into<String>) -> QsimError {
    QsimError::Parse { line, message: message.into() }
}

fn number<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T, QsimError> {
    tok.ok_or_else(|| err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| err(line, format!("bad {what}")))
}

fn parse_output(line: usize, args: &[&str]) -> Result<OutputSpec, QsimError> {
    match args {
        ["pure"] => Ok(OutputSpec::Pure),
        ["dephase-answer"] => Ok(OutputSpec::DephaseAnswer),
        ["keep", rest @ ..] => {
            let sep = rest.iter().position(|t| *t == ":").ok_or_else(|| err(line, "keep needs ':'"))?;
            let dims = rest[..sep]
                .iter()
                .map(|t| number::<usize>(line, Some(t), "factor dimension"))
                .collect::<Result<Vec<_>, _>>()?;
            let keep = rest[sep + 1..]
                .iter()
                .map(|t| match number::<usize>(line, Some(t), "factor number")? {
                    0 => Err(err(line, "factor numbers start at 1")),
                    k => Ok(k - 1),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(OutputSpec::Keep { dims, keep })
        }
        _ => Err(err(line, "output must be pure, dephase-answer or keep")),
    }
}

enum Body {
    Builtins(Vec<Gate>),
    Matrix(Vec<Vec<Complex64>>),
}

/// Parses an algorithm file, rejecting dimensions above `cap`.
pub fn parse_algorithm(text: &str, cap: usize) -> Result<QueryAlgorithm, QsimError> {
    let mut header: [Option<usize>; 4] = [None; 4];
    let mut output = None;
    let mut blocks: Vec<(usize, Body)> = Vec::new();
    let mut open: Option<(usize, Option<Body>)> = None;
    let mut last_line = 0;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&head, args)) = tokens.split_first() else { continue };

        if let Some((start, body)) = open.as_mut() {
            match (head, body.as_mut()) {
                ("end", _) => {
                    let body = body.take().ok_or_else(|| err(line, "empty unitary block"))?;
                    blocks.push((*start, body));
                    open = None;
                }
                ("builtin", None) => *body = Some(Body::Builtins(vec![parse_gate(line, args)?])),
                ("builtin", Some(Body::Builtins(list))) => list.push(parse_gate(line, args)?),
                ("matrix", None) if args.is_empty() => *body = Some(Body::Matrix(Vec::new())),
                (_, Some(Body::Matrix(rows))) => {
                    let dim = dimension(&header, line, cap)?;
                    if rows.len() >= dim {
                        return Err(err(line, "too many matrix rows"));
                    }
                    rows.push(parse_row(line, &tokens, dim)?);
                }
                _ => return Err(err(line, format!("unexpected {head:?} inside a unitary block"))),
            }
            continue;
        }

        let slot = match head {
            "n" => Some(0),
            "q" => Some(1),
            "w" => Some(2),
            "T" => Some(3),
            _ => None,
        };
        if let Some(slot) = slot {
            if args.len() != 1 {
                return Err(err(line, format!("{head} takes one value")));
            }
            if !blocks.is_empty() || header[slot].is_some() {
                return Err(err(line, format!("misplaced or repeated {head}")));
            }
            header[slot] = Some(number(line, args.first().copied(), head)?);
            continue;
        }
        match head {
            "output" => {
                if output.is_some() {
                    return Err(err(line, "repeated output"));
                }
                output = Some(parse_output(line, args)?);
            }
            "unitary" => {
                let t: usize = number(line, args.first().copied(), "unitary number")?;
                if args.len() != 1 || t != blocks.len() {
                    return Err(err(line, format!("expected unitary {}", blocks.len())));
                }
                dimension(&header, line, cap)?;
                open = Some((line, None));
            }
            other => return Err(err(line, format!("unknown directive {other:?}"))),
        }
    }
    if let Some((start, _)) = open {
        return Err(err(start, "unterminated unitary block"));
    }
    let dim = dimension(&header, last_line, cap)?;
    let [Some(n), Some(q), Some(w), Some(t)] = header else { unreachable!("checked by dimension") };
    if blocks.len() != t + 1 {
        return Err(err(last_line, format!("T = {t} needs {} unitaries, found {}", t + 1, blocks.len())));
    }
    let steps = blocks
        .into_iter()
        .map(|(start, body)| match body {
            Body::Builtins(gates) => {
                let mut m = CMatrix::identity(dim, dim);
                for g in &gates {
                    m = g.matrix(n, q, w).map_err(|e| err(start, e.to_string()))? * m;
                }
                Ok(Step { matrix: m, gates: Some(gates) })
            }
            Body::Matrix(rows) => {
                if rows.len() != dim {
                    return Err(err(start, format!("matrix has {} rows, expected {dim}", rows.len())));
                }
                Ok(Step { matrix: CMatrix::from_fn(dim, dim, |r, c| rows[r][c]), gates: None })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let output = output.unwrap_or(OutputSpec::Pure);
    QueryAlgorithm::from_steps(n, q, w, steps, output, cap)
}

fn dimension(header: &[Option<usize>; 4], line: usize, cap: usize) -> Result<usize, QsimError> {
    let [Some(n), Some(q), Some(w), Some(_)] = *header else {
        return Err(err(line, "header needs n, q, w and T"));
    };
    let d = n.checked_mul(q).and_then(|v| v.checked_mul(w)).unwrap_or(usize::MAX);
    if d > cap {
        return Err(QsimError::DimensionCap { dim: d, cap });
    }
    if d == 0 {
        return Err(err(line, "zero dimension"));
    }
    Ok(d)
}

fn parse_gate(line: usize, args: &[&str]) -> Result<Gate, QsimError> {
    Gate::parse(args).map_err(|m| err(line, m))
}

fn parse_row(line: usize, tokens: &[&str], dim: usize) -> Result<Vec<Complex64>, QsimError> {
    if tokens.len() != 2 * dim {
        return Err(err(line, format!("row needs {} numbers, found {}", 2 * dim, tokens.len())));
    }
    let vals = tokens
        .iter()
        .map(|t| match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(err(line, format!("bad number {t:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(vals.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

/// Writes an algorithm so that `parse_algorithm` reproduces it exactly.
pub fn write_algorithm(alg: &QueryAlgorithm) -> String {
    let mut out = format!("n {}\nq {}\nw {}\nT {}\n", alg.n(), alg.q(), alg.w(), alg.queries());
    match alg.output_spec() {
        OutputSpec::Pure => out.push_str("output pure\n"),
        OutputSpec::DephaseAnswer => out.push_str("output dephase-answer\n"),
        OutputSpec::Keep { dims, keep } => {
            out.push_str("output keep");
            dims.iter().for_each(|d| out.push_str(&format!(" {d}")));
            out.push_str(" :");
            keep.iter().for_each(|k| out.push_str(&format!(" {}", k + 1)));
            out.push('\n');
        }
    }
    for (t, step) in alg.steps().iter().enumerate() {
        out.push_str(&format!("unitary {t}\n"));
        match &step.gates {
            Some(gates) => gates.iter().for_each(|g| out.push_str(&format!("builtin {g}\n"))),
            None => {
                out.push_str("matrix\n");
                for r in 0..step.matrix.nrows() {
                    let row: Vec<String> = step
                        .matrix
                        .row(r)
                        .iter()
                        .flat_map(|z| [format!("{:?}", z.re), format!("{:?}", z.im)])
                        .collect();
                    out.push_str(&row.join(" "));
                    out.push('\n');
                }
            }
        }
        out.push_str("end\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::dft;

    const SEARCH: &str = "\
# exact search on four positions
n 4
q 2
w 1
T 1
output pure
unitary 0
builtin shift-answer
builtin dft-answer
builtin dft-index
end
unitary 1
builtin diffusion-index
end
";

    #[test]
    fn builtin_round_trip() {
        let alg = parse_algorithm(SEARCH, 4096).unwrap();
        assert_eq!(alg.queries(), 1);
        let again = parse_algorithm(&write_algorithm(&alg), 4096).unwrap();
        assert_eq!(again, alg);
    }

    #[test]
    fn matrix_round_trip() {
        let h = dft(2);
        let alg = QueryAlgorithm::new(
            1,
            2,
            1,
            vec![h.clone(), h],
            OutputSpec::Keep { dims: vec![1, 2], keep: vec![1] },
        )
        .unwrap();
        let text = write_algorithm(&alg);
        assert!(text.contains("output keep 1 2 : 2"));
        assert_eq!(parse_algorithm(&text, 4096).unwrap(), alg);
    }

    #[test]
    fn errors_carry_lines() {
        let bad = SEARCH.replace("builtin diffusion-index", "builtin warp");
        assert!(matches!(parse_algorithm(&bad, 4096), Err(QsimError::Parse { line: 13, .. })));
        let short = SEARCH.replace("T 1", "T 2");
        assert!(matches!(parse_algorithm(&short, 4096), Err(QsimError::Parse { .. })));
        assert!(matches!(parse_algorithm(SEARCH, 4), Err(QsimError::DimensionCap { dim: 8, cap: 4 })));
        let open = SEARCH.trim_end().trim_end_matches("end");
        assert!(matches!(parse_algorithm(open, 4096), Err(QsimError::Parse { line: 12, .. })));
        let nan = "n 1\nq 2\nw 1\nT 0\nunitary 0\nmatrix\n1 0 0 0\n0 0 NaN 0\nend\n";
        assert!(matches!(parse_algorithm(nan, 4096), Err(QsimError::Parse { line: 8, .. })));
        let huge = SEARCH.replace("output pure", "output keep 4294967296 4294967296 8 : 1");
        assert!(parse_algorithm(&huge, 4096).is_err());
    }
}
