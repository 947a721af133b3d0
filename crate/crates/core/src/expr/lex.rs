use crate::error::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Identifier,
    Operator,
    Paren,
    Comma,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// Byte offset of the first character of the lexeme.
    pub position: usize,
}

/// Split source text into tokens. Whitespace separates tokens and is
/// otherwise ignored; every other character must belong to some lexeme.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        match c {
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(ParseError {
                            kind: ParseErrorKind::MalformedNumber,
                            position: start,
                        });
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Number,
                    lexeme: source[start..i].to_string(),
                    position: start,
                });
            }
            'a'..='z' | 'A'..='Z' => {
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphabetic() {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Identifier,
                    lexeme: source[start..i].to_string(),
                    position: start,
                });
            }
            '+' | '-' | '*' | '/' | '^' | '!' => {
                i += 1;
                tokens.push(Token {
                    kind: TokenKind::Operator,
                    lexeme: c.to_string(),
                    position: start,
                });
            }
            '(' | ')' => {
                i += 1;
                tokens.push(Token {
                    kind: TokenKind::Paren,
                    lexeme: c.to_string(),
                    position: start,
                });
            }
            ',' => {
                i += 1;
                tokens.push(Token {
                    kind: TokenKind::Comma,
                    lexeme: c.to_string(),
                    position: start,
                });
            }
            _ => {
                return Err(ParseError {
                    kind: ParseErrorKind::UnknownCharacter,
                    position: start,
                })
            }
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_simple_expression() {
        let toks = tokenize("1/2^n").unwrap();
        let lexemes: Vec<_> = toks.iter().map(|t| t.lexeme.as_str()).collect();
        assert_eq!(lexemes, ["1", "/", "2", "^", "n"]);
        assert_eq!(toks[4].kind, TokenKind::Identifier);
    }

    #[test]
    fn empty_input_gives_empty_stream() {
        assert!(tokenize("").unwrap().is_empty());
        assert!(tokenize("   ").unwrap().is_empty());
    }

    #[test]
    fn unknown_character_reports_offset() {
        let err = tokenize("n @ 2").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownCharacter);
        assert_eq!(err.position, 2);
    }

    #[test]
    fn dangling_decimal_point_is_malformed() {
        let err = tokenize("1.").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MalformedNumber);
        assert_eq!(err.position, 0);
    }

    #[test]
    fn positions_are_strictly_increasing_and_cover_input() {
        let src = "1/( n * ln(n) ^2 )";
        let toks = tokenize(src).unwrap();
        let mut last = None;
        for t in &toks {
            if let Some(p) = last {
                assert!(t.position > p);
            }
            last = Some(t.position);
        }
        let joined: String = toks.iter().map(|t| t.lexeme.as_str()).collect();
        let stripped: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        assert_eq!(joined, stripped);
    }
}
