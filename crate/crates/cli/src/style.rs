//! ANSI styling that collapses to plain text when colour is off.

#[derive(Clone, Copy, Debug)]
pub struct Style {
    pub color: bool,
}

impl Style {
    fn wrap(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    pub fn bold(&self, text: &str) -> String {
        self.wrap("1", text)
    }

    pub fn good(&self, text: &str) -> String {
        self.wrap("32", text)
    }

    pub fn bad(&self, text: &str) -> String {
        self.wrap("31", text)
    }

    pub fn dim(&self, text: &str) -> String {
        self.wrap("2", text)
    }

    /// Escape sequence that clears the screen before a new frame.
    pub fn clear(&self) -> &'static str {
        if self.color {
            "\x1b[2J\x1b[H"
        } else {
            "\n"
        }
    }
}
