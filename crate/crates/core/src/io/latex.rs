//! `bussproofs` export. Binary inferences whose premiss subtree holds two or
//! more inferences are cut out into separate, starred derivations so that
//! wide proofs still fit on a page.

use crate::kernel::{NodeId, ProofTree, RuleId};
use crate::syntax::{print_sequent, Sequent};

fn rule_label(r: RuleId) -> &'static str {
    use RuleId::*;
    match r {
        AndL => r"$\land$L",
        AndR => r"$\land$R",
        OrL => r"$\lor$L",
        OrR => r"$\lor$R",
        NotL => r"$\lnot$L",
        NotR => r"$\lnot$R",
        ImpL => r"$\rightarrow$L",
        ImpR => r"$\rightarrow$R",
        IffL => r"$\leftrightarrow$L",
        IffR => r"$\leftrightarrow$R",
        ExistsL => r"$\exists$L",
        ExistsR => r"$\exists$R",
        ForallL => r"$\forall$L",
        ForallR => r"$\forall$R",
        ContrL => "CL",
        ContrR => "CR",
        SubstL => r"$=$L",
        SubstR => r"$=$R",
        EqL => r"$=$I",
        Ax => "Ax",
        EqR => "Refl",
    }
}

/// Math-mode rendering of a sequent's canonical text.
pub(crate) fn latex_sequent(s: &Sequent) -> String {
    let text = print_sequent(s);
    let mut out = String::with_capacity(text.len() * 2);
    let mut chars = text.chars().peekable();
    while let Some(ch) = chars.next() {
        if ch.is_ascii_alphanumeric() || ch == '_' {
            let mut word = String::from(ch);
            while let Some(&n) = chars.peek() {
                if n.is_ascii_alphanumeric() || n == '_' || n == '\'' {
                    word.push(n);
                    chars.next();
                } else {
                    break;
                }
            }
            match word.as_str() {
                "forall" => out.push_str(r"\forall "),
                "exists" => out.push_str(r"\exists "),
                w if w.chars().count() == 1 => out.push_str(w),
                w => {
                    out.push_str(r"\mathit{");
                    out.push_str(&w.replace('_', r"\_"));
                    out.push('}');
                }
            }
            continue;
        }
        let rest: String = std::iter::once(ch).chain(chars.clone().take(2)).collect();
        let (sym, len) = if rest.starts_with("<->") {
            (r"\leftrightarrow ", 3)
        } else if rest.starts_with("->") {
            (r"\rightarrow ", 2)
        } else if rest.starts_with("=>") {
            (r"\Rightarrow ", 2)
        } else {
            match ch {
                '&' => (r"\land ", 1),
                '|' => (r"\lor ", 1),
                '~' => (r"\lnot ", 1),
                _ => {
                    out.push(ch);
                    continue;
                }
            }
        };
        out.push_str(sym);
        for _ in 1..len {
            chars.next();
        }
    }
    out.split(' ').filter(|w| !w.is_empty()).collect::<Vec<_>>().join(" ")
}

struct Exporter<'t> {
    tree: &'t ProofTree,
    /// Roots of cut-out derivations, in order of discovery.
    segments: Vec<NodeId>,
}

impl Exporter<'_> {
    fn marker(k: usize) -> String {
        format!("({})", "*".repeat(k + 1))
    }

    fn inferences(&self, id: NodeId) -> usize {
        self.tree
            .descendants(id)
            .into_iter()
            .chain([id])
            .filter(|&n| self.tree.node(n).is_ok_and(|n| n.step.is_some()))
            .count()
    }

    fn emit(&mut self, id: NodeId, out: &mut String) {
        let node = self.tree.node(id).expect("tree ids exist");
        let seq = latex_sequent(&node.sequent);
        let Some(step) = &node.step else {
            out.push_str(&format!("\\AxiomC{{${seq}$}}\n"));
            return;
        };
        if node.children.is_empty() {
            out.push_str("\\AxiomC{}\n");
        }
        let binary = node.children.len() == 2;
        for &c in &node.children {
            if binary && self.inferences(c) >= 2 {
                let k = self.segments.len();
                self.segments.push(c);
                let child = latex_sequent(&self.tree.node(c).expect("child exists").sequent);
                out.push_str(&format!("\\AxiomC{{{}}}\n\\UnaryInfC{{${child}$}}\n", Self::marker(k)));
            } else {
                self.emit(c, out);
            }
        }
        out.push_str(&format!("\\RightLabel{{\\scriptsize {}}}\n", rule_label(step.rule)));
        let inf = match node.children.len() {
            0 | 1 => "UnaryInfC",
            2 => "BinaryInfC",
            _ => "TrinaryInfC",
        };
        out.push_str(&format!("\\{inf}{{${seq}$}}\n"));
    }
}

/// A standalone-includable `bussproofs` rendering of `tree`.
pub fn export_latex(tree: &ProofTree) -> String {
    let mut ex = Exporter { tree, segments: Vec::new() };
    let mut out = String::from("% requires \\usepackage{bussproofs}\n");
    let mut body = String::new();
    ex.emit(tree.root(), &mut body);
    out.push_str("\\begin{prooftree}\n");
    out.push_str(&body);
    out.push_str("\\end{prooftree}\n");
    let mut k = 0;
    while k < ex.segments.len() {
        let root = ex.segments[k];
        let mut body = String::new();
        ex.emit(root, &mut body);
        out.push_str(&format!("\n\\noindent {}\n\\begin{{prooftree}}\n", Exporter::marker(k)));
        out.push_str(&body);
        out.push_str("\\end{prooftree}\n");
        k += 1;
    }
    out
}

/// Inference lines in an export, link inferences included.
pub fn latex_inference_count(latex: &str) -> usize {
    ["\\UnaryInfC", "\\BinaryInfC", "\\TrinaryInfC"]
        .iter()
        .map(|m| latex.matches(m).count())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::tests::figure4;
    use crate::syntax::{parse_sequent, Signature};

    #[test]
    fn symbols_are_translated() {
        let s = parse_sequent("forall x. P(x) <-> ~Q_r, A & B | C => D -> E", &mut Signature::new()).unwrap();
        let l = latex_sequent(&s);
        for piece in [r"\forall ", r"\leftrightarrow ", r"\lnot ", r"\mathit{Q\_r}", r"\land ", r"\lor ", r"\Rightarrow ", r"\rightarrow "] {
            assert!(l.contains(piece), "{piece} missing from {l}");
        }
        assert!(!l.contains("->") && !l.contains("=>"));
    }

    #[test]
    fn figure4_splits_into_three_derivations() {
        let l = export_latex(&figure4());
        assert_eq!(l.matches("\\begin{prooftree}").count(), 3);
        assert_eq!(latex_inference_count(&l), 18);
        assert!(l.contains("(*)") && l.contains("(**)"));
    }

    #[test]
    fn open_leaves_are_bare_axioms() {
        let t = ProofTree::new(parse_sequent("P => Q", &mut Signature::new()).unwrap(), Signature::new()).unwrap();
        let l = export_latex(&t);
        assert!(l.contains("\\AxiomC{$P \\Rightarrow Q$}"));
        assert_eq!(latex_inference_count(&l), 0);
    }
}
