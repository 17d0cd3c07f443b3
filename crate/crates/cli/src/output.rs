//! Number formatting shared by the subcommands.

#[derive(Debug, Clone, Copy)]
pub struct IndexFormat {
    pub fraction: bool,
}

impl IndexFormat {
    /// An index value, or a difference of index values.
    pub fn index(self, value: f64) -> String {
        if self.fraction {
            format!("{:.4}", value)
        } else {
            format!("{:.1}", 100.0 * value)
        }
    }

    pub fn pair(self, forward: f64, backward: f64) -> String {
        format!("{} / {}", self.index(forward), self.index(backward))
    }
}

/// Fixed four decimals, for impact factors and uncited fractions in reports.
pub fn fixed4(value: f64) -> String {
    format!("{value:.4}")
}

/// Fixed six decimals, for plot series and fitted constants.
pub fn fixed6(value: f64) -> String {
    format!("{value:.6}")
}

/// Quotes a CSV field when it needs it.
pub fn field(text: &str) -> String {
    if text.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_owned()
    }
}
