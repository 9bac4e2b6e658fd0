//! Text renderings of a document. Everything is derived from the JSON
//! payload, so cached and fresh documents print identically.

use serde_json::Value;

use crate::args::Format;
use crate::document::{Kind, OutputDocument};

pub fn render(doc: &OutputDocument, format: Format) -> String {
    match format {
        Format::Json => doc.to_json(),
        Format::Csv => {
            let (header, rows) = rows(doc);
            let mut out = String::new();
            for line in std::iter::once(header.iter().map(|h| h.to_string()).collect()).chain(rows)
            {
                let cells: Vec<String> = line.iter().map(|c: &String| csv_escape(c)).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        Format::Table => table(doc),
    }
}

fn csv_escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn label(v: &Value) -> (String, String) {
    (v[0].to_string(), v[1].to_string())
}

fn label_str(v: &Value) -> String {
    format!("({},{})", v[0], v[1])
}

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn items(v: &Value) -> &[Value] {
    v.as_array().map(Vec::as_slice).unwrap_or(&[])
}

fn rows(doc: &OutputDocument) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let p = &doc.payload;
    match doc.kind {
        Kind::Labels => (
            vec!["m", "n", "partner_m", "partner_n"],
            items(&p["labels"])
                .iter()
                .map(|e| {
                    let (m, n) = label(&e["label"]);
                    let (pm, pn) = label(&e["partner"]);
                    vec![m, n, pm, pn]
                })
                .collect(),
        ),
        Kind::Weights => (
            vec!["m", "n", "weight"],
            items(&p["weights"])
                .iter()
                .map(|e| {
                    let (m, n) = label(&e["label"]);
                    vec![m, n, text(&e["weight"])]
                })
                .collect(),
        ),
        Kind::Qdim => (
            vec!["m", "n", "value", "closed_form"],
            items(&p["qdims"])
                .iter()
                .map(|e| {
                    let (m, n) = label(&e["label"]);
                    vec![m, n, text(&e["value"]), text(&e["closed_form"])]
                })
                .collect(),
        ),
        Kind::Smatrix => {
            let order = items(&p["order"]);
            let mut out = Vec::new();
            for (a, row) in items(&p["entries"]).iter().enumerate() {
                for (b, z) in items(row).iter().enumerate() {
                    let (am, an) = label(&order[a]);
                    let (bm, bn) = label(&order[b]);
                    out.push(vec![am, an, bm, bn, text(&z["re"]), text(&z["im"])]);
                }
            }
            (vec!["a_m", "a_n", "b_m", "b_n", "re", "im"], out)
        }
        Kind::Fusion if p.get("products").is_some() => (
            vec!["m", "n"],
            items(&p["products"])
                .iter()
                .map(|l| {
                    let (m, n) = label(l);
                    vec![m, n]
                })
                .collect(),
        ),
        Kind::Fusion => (
            vec!["a_m", "a_n", "b_m", "b_n", "c_m", "c_n", "multiplicity"],
            items(&p["entries"])
                .iter()
                .map(|e| {
                    let (am, an) = label(&e["a"]);
                    let (bm, bn) = label(&e["b"]);
                    let (cm, cn) = label(&e["c"]);
                    vec![am, an, bm, bn, cm, cn, text(&e["multiplicity"])]
                })
                .collect(),
        ),
        Kind::Characters => {
            let mut out = Vec::new();
            for ch in items(&p["characters"]) {
                let (m, n) = label(&ch["label"]);
                for t in items(&ch["terms"]) {
                    out.push(vec![
                        m.clone(),
                        n.clone(),
                        text(&t["exponent"]),
                        text(&t["coefficient"]),
                    ]);
                }
            }
            (vec!["m", "n", "exponent", "coefficient"], out)
        }
        Kind::VerifyReport => (
            vec!["name", "status", "metric", "detail"],
            items(&p["checks"])
                .iter()
                .map(|c| {
                    vec![
                        text(&c["name"]),
                        text(&c["status"]),
                        text(&c["metric"]),
                        text(&c["detail"]),
                    ]
                })
                .collect(),
        ),
    }
}

fn table(doc: &OutputDocument) -> String {
    let p = &doc.payload;
    let mut out = format!("{} at k={}\n", doc.kind.as_str(), doc.level);
    if doc.kind == Kind::Fusion && p.get("products").is_some() {
        let products: Vec<String> = items(&p["products"]).iter().map(label_str).collect();
        out.push_str(&format!(
            "{} x {} = {{{}}}\n",
            label_str(&p["a"]),
            label_str(&p["b"]),
            products.join(",")
        ));
        return out;
    }
    if doc.kind == Kind::VerifyReport {
        let verdict = if p["passed"].as_bool() == Some(true) {
            "PASS"
        } else {
            "FAIL"
        };
        out.push_str(&format!(
            "overall: {verdict}, kappa = {}\n",
            text(&p["kappa"])
        ));
    }
    let (header, rows) = rows(doc);
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in &rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    out.push_str(&line(header.iter().map(|h| h.to_string()).collect()));
    for r in rows {
        out.push_str(&line(r));
    }
    out
}
