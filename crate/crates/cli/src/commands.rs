use std::io::{IsTerminal, Read};
use std::path::Path;

use sct_core::io::{export_latex, export_smtlib, load_proof, save_proof};
use sct_core::oracle::{diagonal_baseline, try_partial_instantiation};
use sct_core::{
    check_proof, parse_sequent, Occurrence, ProofCheck, SearchBudget, Sequent, Side, Signature,
    ValidityStatus,
};
use sct_server::ServerConfig;
use serde_json::{json, Value};

pub const OK: u8 = 0;
pub const NEGATIVE: u8 = 1;
pub const USAGE: u8 = 2;
pub const UNKNOWN: u8 = 3;

/// The worked example for partial instantiation: `(label, symbol order, sequent)`.
/// The unary-`h` reading matches the printed enumerations; the binary one
/// matches the printed sequent.
pub const BENCH_CASES: [(&str, &str, &str); 2] = [
    (
        "h/1",
        "fun f/1\nfun g/2\nfun h/1\nfun c/0\nfun d/0\nfun e/0",
        "forall y. P(g(e,f(y))), Q(f(c)), R(h(d),e) => exists x. P(x)",
    ),
    (
        "h/2",
        "fun f/1\nfun g/2\nfun h/2\nfun c/0\nfun d/0\nfun e/0",
        "forall y. P(g(e,f(y))), Q(f(c)), R(h(d,c),e) => exists x. P(x)",
    ),
];

pub struct Output {
    json: bool,
    color: bool,
}

impl Output {
    pub fn new(json: bool) -> Self {
        let color = !json && std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal();
        Output { json, color }
    }

    /// Prints `value` in JSON mode, `text` otherwise.
    fn emit(&self, value: Value, text: impl FnOnce() -> String) {
        if self.json {
            println!("{value}");
        } else {
            println!("{}", text());
        }
    }

    fn fail(&self, code: u8, message: &str) -> u8 {
        if self.json {
            println!("{}", json!({ "error": message }));
        }
        eprintln!("sct: {message}");
        code
    }

    fn paint(&self, color: &str) -> String {
        if !self.color {
            return color.to_string();
        }
        let ansi = match color {
            "green" => "32",
            "red" => "31",
            _ => "33",
        };
        format!("\x1b[{ansi}m{color}\x1b[0m")
    }
}

fn read_input(arg: Option<&str>) -> std::io::Result<String> {
    match arg {
        Some(text) if text != "-" => Ok(text.to_string()),
        _ => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf.trim().to_string())
        }
    }
}

fn read_sequent(out: &Output, arg: Option<&str>) -> Result<(Sequent, Signature), u8> {
    let text = read_input(arg).map_err(|e| out.fail(USAGE, &format!("reading stdin: {e}")))?;
    let mut sig = Signature::new();
    let s = parse_sequent(&text, &mut sig).map_err(|e| out.fail(USAGE, &e.to_string()))?;
    if let Some(x) = s.free_vars().first() {
        return Err(out.fail(USAGE, &format!("not a sentence: variable `{x}` occurs free")));
    }
    Ok((s, sig))
}

pub fn check(out: &Output, path: &Path) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return out.fail(USAGE, &format!("{}: {e}", path.display())),
    };
    let loaded = match load_proof(&text) {
        Ok(l) => l,
        Err(e) => return out.fail(USAGE, &format!("{}: {e}", path.display())),
    };
    let (value, text, code) = match &loaded.report {
        ProofCheck::Complete => (json!({ "result": "complete" }), "Complete".to_string(), OK),
        ProofCheck::Incomplete(open) => (
            json!({ "result": "incomplete", "open_leaves": open }),
            format!("Incomplete: open leaves {open:?}"),
            NEGATIVE,
        ),
        ProofCheck::Malformed { node, reason } => (
            json!({ "result": "malformed", "node": node, "reason": reason }),
            format!("Malformed(node {node}): {reason}"),
            NEGATIVE,
        ),
    };
    out.emit(value, || text);
    code
}

pub fn prove(out: &Output, sequent: Option<&str>, path: Option<&Path>, budget: &SearchBudget) -> u8 {
    let (s, _) = match read_sequent(out, sequent) {
        Ok(p) => p,
        Err(code) => return code,
    };
    match sct_core::status(&s, budget) {
        ValidityStatus::Green(tree) => {
            let report = check_proof(&tree);
            if !report.is_complete() {
                return out.fail(UNKNOWN, &format!("internal error: search produced a rejected proof: {report:?}"));
            }
            let doc = save_proof(&tree);
            if let Some(p) = path {
                if let Err(e) = std::fs::write(p, &doc) {
                    return out.fail(USAGE, &format!("{}: {e}", p.display()));
                }
            }
            let doc_value: Value = serde_json::from_str(&doc).expect("saved proofs are JSON");
            out.emit(json!({ "result": "valid", "inferences": tree.inference_count(), "proof": doc_value }), || {
                format!("valid ({} inferences)", tree.inference_count())
            });
            OK
        }
        ValidityStatus::Red(m) => {
            let model = m.to_json();
            out.emit(json!({ "result": "invalid", "countermodel": model }), || {
                format!("invalid\n{model}")
            });
            NEGATIVE
        }
        ValidityStatus::Yellow => {
            out.emit(json!({ "result": "unknown" }), || "unknown".to_string());
            UNKNOWN
        }
    }
}

pub fn status(out: &Output, sequent: Option<&str>, budget: &SearchBudget) -> u8 {
    let (s, _) = match read_sequent(out, sequent) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let st = sct_core::status(&s, budget);
    let color = st.color();
    let model = match &st {
        ValidityStatus::Red(m) => Some(m.to_json()),
        _ => None,
    };
    out.emit(json!({ "status": color, "countermodel": model }), || match &model {
        Some(m) => format!("{}\n{m}", out.paint(color)),
        None => out.paint(color),
    });
    match st {
        ValidityStatus::Green(_) => OK,
        ValidityStatus::Red(_) => NEGATIVE,
        ValidityStatus::Yellow => UNKNOWN,
    }
}

pub fn hint(out: &Output, sequent: Option<&str>, budget: &SearchBudget) -> u8 {
    let (s, _) = match read_sequent(out, sequent) {
        Ok(p) => p,
        Err(code) => return code,
    };
    match sct_core::hint(&s, budget) {
        Some(h) => {
            let params = serde_json::to_value(&h.params).expect("params serialize");
            out.emit(json!({ "rule": h.rule, "params": params }), || {
                if params.as_object().is_some_and(|o| o.is_empty()) {
                    h.rule.to_string()
                } else {
                    format!("{}\n{params}", h.rule)
                }
            });
            OK
        }
        None => {
            out.emit(json!({ "rule": null }), || "no hint".to_string());
            NEGATIVE
        }
    }
}

pub fn serve(port: Option<u16>) -> u8 {
    let mut config = ServerConfig::from_env();
    if let Some(p) = port {
        config.port = p;
    }
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("sct: starting runtime: {e}");
            return USAGE;
        }
    };
    eprintln!("sct: serving on port {}", config.port);
    match runtime.block_on(sct_server::serve(config)) {
        Ok(()) => OK,
        Err(e) => {
            eprintln!("sct: {e}");
            USAGE
        }
    }
}

pub fn export(out: &Output, input: Option<&str>, latex: bool) -> u8 {
    let text = if latex {
        let raw = match input {
            Some(p) if p != "-" => std::fs::read_to_string(p).map_err(|e| format!("{p}: {e}")),
            _ => read_input(None).map_err(|e| format!("reading stdin: {e}")),
        };
        let loaded = match raw.map(|r| load_proof(&r).map_err(|e| e.to_string())) {
            Ok(Ok(l)) => l,
            Ok(Err(e)) | Err(e) => return out.fail(USAGE, &e),
        };
        export_latex(&loaded.tree)
    } else {
        let (s, sig) = match read_sequent(out, input) {
            Ok(p) => p,
            Err(code) => return code,
        };
        export_smtlib(&s, &sig)
    };
    let format = if latex { "latex" } else { "smtlib" };
    out.emit(json!({ "format": format, "text": text }), || text.trim_end().to_string());
    OK
}

pub fn bench(out: &Output, limit: usize, budget: &SearchBudget) -> u8 {
    let q = Occurrence { side: Side::Succedent, index: 0 };
    let mut records = Vec::new();
    let mut csv = String::from("variant,method,count,witness");
    for (label, order, text) in BENCH_CASES {
        let order = Signature::parse(order).expect("fixed order");
        let s = parse_sequent(text, &mut order.clone()).expect("fixed sequent");
        let found = match try_partial_instantiation(&s, q, budget, Some(&order)) {
            Ok(f) => f,
            Err(e) => return out.fail(UNKNOWN, &format!("{label}: partial instantiation failed: {e:?}")),
        };
        let baseline = diagonal_baseline(&s, q, &order, limit, budget).expect("order has constants");
        let (position, ground) = match &baseline {
            Some((p, t)) => (p.to_string(), t.to_string()),
            None => (format!(">{limit}"), String::new()),
        };
        let w = found.witness.to_string();
        csv.push_str(&format!("\n{label},partial_instantiation,{},\"{w}\"", found.candidates));
        csv.push_str(&format!("\n{label},partial_instantiation_groundings,{},\"{w}\"", found.groundings));
        csv.push_str(&format!("\n{label},diagonal_ground,{position},\"{ground}\""));
        records.push(json!({
            "variant": label,
            "candidates": found.candidates,
            "groundings": found.groundings,
            "partial_term": found.partial.to_string(),
            "witness": w,
            "diagonal_position": baseline.as_ref().map(|(p, _)| p),
            "diagonal_witness": baseline.as_ref().map(|(_, t)| t.to_string()),
        }));
    }
    out.emit(Value::Array(records), || csv);
    OK
}
