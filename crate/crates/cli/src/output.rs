/// Ordered key/value report rendered either as an aligned table or as
/// `key=value` lines.
#[derive(Default)]
pub struct Report {
    rows: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn add(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.rows.push((key.into(), value.to_string()));
        self
    }

    pub fn render(&self, porcelain: bool) -> String {
        if porcelain {
            return self.rows.iter().map(|(k, v)| format!("{k}={v}\n")).collect();
        }
        let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        self.rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
    }
}

pub fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_layouts() {
        let mut r = Report::new();
        r.add("n", 2).add("alpha", -1);
        assert_eq!(r.render(true), "n=2\nalpha=-1\n");
        assert_eq!(r.render(false), "n      2\nalpha  -1\n");
    }
}
