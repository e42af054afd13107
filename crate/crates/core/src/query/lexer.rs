use std::fmt;

use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    Str(String),
    Select,
    From,
    Where,
    And,
    Or,
    Snapshot,
    In,
    As,
    Now,
    Star,
    Comma,
    Dot,
    DotDot,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Minus,
    /// `->`
    Arrow,
    /// `<-`
    LeftArrow,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl TokenKind {
    fn keyword(word: &str) -> Option<TokenKind> {
        Some(match word.to_ascii_uppercase().as_str() {
            "SELECT" => TokenKind::Select,
            "FROM" => TokenKind::From,
            "WHERE" => TokenKind::Where,
            "AND" => TokenKind::And,
            "OR" => TokenKind::Or,
            "SNAPSHOT" => TokenKind::Snapshot,
            "IN" => TokenKind::In,
            "AS" => TokenKind::As,
            "NOW" => TokenKind::Now,
            _ => return None,
        })
    }

    pub fn is_keyword_text(word: &str) -> bool {
        TokenKind::keyword(word).is_some()
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Ident(s) => return write!(f, "identifier `{s}`"),
            TokenKind::Int(i) => return write!(f, "integer {i}"),
            TokenKind::Str(s) => return write!(f, "string '{s}'"),
            TokenKind::Select => "SELECT",
            TokenKind::From => "FROM",
            TokenKind::Where => "WHERE",
            TokenKind::And => "AND",
            TokenKind::Or => "OR",
            TokenKind::Snapshot => "SNAPSHOT",
            TokenKind::In => "IN",
            TokenKind::As => "AS",
            TokenKind::Now => "NOW",
            TokenKind::Star => "`*`",
            TokenKind::Comma => "`,`",
            TokenKind::Dot => "`.`",
            TokenKind::DotDot => "`..`",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::LBracket => "`[`",
            TokenKind::RBracket => "`]`",
            TokenKind::Minus => "`-`",
            TokenKind::Arrow => "`->`",
            TokenKind::LeftArrow => "`<-`",
            TokenKind::Eq => "`=`",
            TokenKind::Ne => "`<>`",
            TokenKind::Lt => "`<`",
            TokenKind::Le => "`<=`",
            TokenKind::Gt => "`>`",
            TokenKind::Ge => "`>=`",
            TokenKind::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

/// Splits query text into tokens; lines and columns are 1-based and count
/// characters.
pub fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (start_line, start_col) = (line, col);
        let peek = chars.get(i + 1).copied();
        let error = |message: String| SyntaxError {
            line: start_line,
            column: start_col,
            expected: Vec::new(),
            found: c.to_string(),
            message,
        };
        let (kind, width) = match c {
            '*' => (TokenKind::Star, 1),
            ',' => (TokenKind::Comma, 1),
            '(' => (TokenKind::LParen, 1),
            ')' => (TokenKind::RParen, 1),
            '[' => (TokenKind::LBracket, 1),
            ']' => (TokenKind::RBracket, 1),
            '=' => (TokenKind::Eq, 1),
            '.' if peek == Some('.') => (TokenKind::DotDot, 2),
            '.' => (TokenKind::Dot, 1),
            '-' if peek == Some('>') => (TokenKind::Arrow, 2),
            '-' => (TokenKind::Minus, 1),
            '<' if peek == Some('-') => (TokenKind::LeftArrow, 2),
            '<' if peek == Some('=') => (TokenKind::Le, 2),
            '<' if peek == Some('>') => (TokenKind::Ne, 2),
            '<' => (TokenKind::Lt, 1),
            '>' if peek == Some('=') => (TokenKind::Ge, 2),
            '>' => (TokenKind::Gt, 1),
            '!' if peek == Some('=') => (TokenKind::Ne, 2),
            '\'' => {
                let mut value = String::new();
                let mut j = i + 1;
                let mut consumed_lines = 0;
                let mut last_line_start = None;
                loop {
                    match chars.get(j) {
                        None => return Err(error("unterminated string literal".into())),
                        Some('\'') if chars.get(j + 1) == Some(&'\'') => {
                            value.push('\'');
                            j += 2;
                        }
                        Some('\'') => {
                            j += 1;
                            break;
                        }
                        Some(&ch) => {
                            if ch == '\n' {
                                consumed_lines += 1;
                                last_line_start = Some(j + 1);
                            }
                            value.push(ch);
                            j += 1;
                        }
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Str(value),
                    line: start_line,
                    column: start_col,
                });
                match last_line_start {
                    Some(s) => {
                        line += consumed_lines;
                        col = j - s + 1;
                    }
                    None => col += j - i,
                }
                i = j;
                continue;
            }
            d if d.is_ascii_digit() => {
                let end = (i..chars.len())
                    .find(|&j| !chars[j].is_ascii_digit())
                    .unwrap_or(chars.len());
                let digits: String = chars[i..end].iter().collect();
                let value = digits
                    .parse::<i64>()
                    .map_err(|_| error(format!("integer `{digits}` out of range")))?;
                (TokenKind::Int(value), end - i)
            }
            a if a.is_alphabetic() || a == '_' => {
                let end = (i..chars.len())
                    .find(|&j| !(chars[j].is_alphanumeric() || chars[j] == '_'))
                    .unwrap_or(chars.len());
                let word: String = chars[i..end].iter().collect();
                let kind = TokenKind::keyword(&word).unwrap_or(TokenKind::Ident(word));
                (kind, end - i)
            }
            other => return Err(error(format!("unexpected character `{other}`"))),
        };
        tokens.push(Token {
            kind,
            line: start_line,
            column: start_col,
        });
        i += width;
        col += width;
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        line,
        column: col,
    });
    Ok(tokens)
}
