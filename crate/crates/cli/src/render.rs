use serde_json::Value;

/// Flattens a JSON document into aligned `path  value` rows.
pub fn table(value: &Value) -> String {
    let mut rows = Vec::new();
    flatten(value, String::new(), &mut rows);
    let width = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let pad = width - k.chars().count();
        out.push_str(&k);
        out.push_str(&" ".repeat(pad + 2));
        out.push_str(&v);
        out.push('\n');
    }
    out
}

fn flatten(value: &Value, path: String, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                flatten(v, p, rows);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            if items.iter().all(|v| !v.is_object() && !v.is_array()) {
                let parts: Vec<String> = items.iter().map(scalar).collect();
                rows.push((path, parts.join(", ")));
            } else {
                for (i, v) in items.iter().enumerate() {
                    flatten(v, format!("{path}[{i}]"), rows);
                }
            }
        }
        other => rows.push((
            if path.is_empty() {
                "value".into()
            } else {
                path
            },
            scalar(other),
        )),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) if a.is_empty() => "[]".into(),
        Value::Object(o) if o.is_empty() => "{}".into(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn nested_paths_are_joined() {
        let t = table(&json!({"a": {"b": 1, "c": [1, 2]}, "d": [{"e": "x"}], "f": []}));
        assert_eq!(t, "a.b     1\na.c     1, 2\nd[0].e  x\nf       []\n");
    }
}
