use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Sym(&'static str),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

const SYMBOLS: [&str; 24] = [
    "==", "!=", "<=", ">=", "&&", "||", "++", "{", "}", "(", ")", "[", "]", ";", ",", ":", ".", "=", "<", ">", "+",
    "-", "!", "@",
];

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for &b in &bytes[*i..*i + n] {
            if b == b'\n' {
                *line += 1;
                *col = 1;
            } else if b & 0xC0 != 0x80 {
                *col += 1;
            }
        }
        *i += n;
    };
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if src[i..].starts_with("/*") {
            let Some(end) = src[i + 2..].find("*/") else {
                return Err(ParseError::new(line, col, "`*/` closing the comment", "end of input"));
            };
            advance(&mut i, &mut line, &mut col, end + 4);
            continue;
        }
        let (start_line, start_col) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: start_line, column: start_col });
        if b.is_ascii_alphabetic() || b == b'_' {
            let len = bytes[i..].iter().take_while(|c| c.is_ascii_alphanumeric() || **c == b'_').count();
            push(&mut out, Tok::Ident(src[i..i + len].to_string()));
            advance(&mut i, &mut line, &mut col, len);
        } else if b.is_ascii_digit() {
            let len = bytes[i..].iter().take_while(|c| c.is_ascii_digit()).count();
            let text = &src[i..i + len];
            let value = text
                .parse::<i64>()
                .map_err(|_| ParseError::new(line, col, "an integer that fits in 64 bits", text))?;
            push(&mut out, Tok::Int(value));
            advance(&mut i, &mut line, &mut col, len);
        } else if b == b'"' {
            let Some(end) = src[i + 1..].find(['"', '\n']).filter(|e| bytes[i + 1 + e] == b'"') else {
                return Err(ParseError::new(line, col, "closing `\"`", "end of line"));
            };
            push(&mut out, Tok::Str(src[i + 1..i + 1 + end].to_string()));
            advance(&mut i, &mut line, &mut col, end + 2);
        } else if let Some(sym) = SYMBOLS.iter().find(|s| src[i..].starts_with(**s)) {
            push(&mut out, Tok::Sym(sym));
            advance(&mut i, &mut line, &mut col, sym.len());
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(ParseError::new(line, col, "a token", format!("`{ch}`")));
        }
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}
