use super::FrontendError;

pub const MAX_CARDINAL: u32 = 999_999;

const UNITS: [&str; 30] = [
    "cero",
    "uno",
    "dos",
    "tres",
    "cuatro",
    "cinco",
    "seis",
    "siete",
    "ocho",
    "nueve",
    "diez",
    "once",
    "doce",
    "trece",
    "catorce",
    "quince",
    "dieciséis",
    "diecisiete",
    "dieciocho",
    "diecinueve",
    "veinte",
    "veintiuno",
    "veintidós",
    "veintitrés",
    "veinticuatro",
    "veinticinco",
    "veintiséis",
    "veintisiete",
    "veintiocho",
    "veintinueve",
];

const TENS: [&str; 10] = [
    "", "", "", "treinta", "cuarenta", "cincuenta", "sesenta", "setenta", "ochenta", "noventa",
];

const HUNDREDS: [&str; 10] = [
    "",
    "ciento",
    "doscientos",
    "trescientos",
    "cuatrocientos",
    "quinientos",
    "seiscientos",
    "setecientos",
    "ochocientos",
    "novecientos",
];

/// Spells `n` as a Spanish cardinal (0..=999999).
///
/// Thousands multipliers keep their full form ("veintiuno mil"); apocopated
/// forms such as "veintiún" are not produced.
pub fn expand_cardinal(n: u32) -> Result<String, FrontendError> {
    if n > MAX_CARDINAL {
        return Err(FrontendError::CardinalOutOfRange(n));
    }
    if n == 0 {
        return Ok(UNITS[0].to_string());
    }
    let mut words = Vec::new();
    let thousands = n / 1000;
    let rest = n % 1000;
    match thousands {
        0 => {}
        1 => words.push("mil".to_string()),
        k => {
            words.push(below_thousand(k));
            words.push("mil".to_string());
        }
    }
    if rest > 0 {
        words.push(below_thousand(rest));
    }
    Ok(words.join(" "))
}

// 1..=999
fn below_thousand(n: u32) -> String {
    debug_assert!((1..1000).contains(&n));
    if n == 100 {
        return "cien".to_string();
    }
    let h = n / 100;
    let r = n % 100;
    let mut parts = Vec::new();
    if h > 0 {
        parts.push(HUNDREDS[h as usize].to_string());
    }
    if r > 0 {
        parts.push(below_hundred(r));
    }
    parts.join(" ")
}

// 1..=99
fn below_hundred(n: u32) -> String {
    if n < 30 {
        return UNITS[n as usize].to_string();
    }
    let t = TENS[(n / 10) as usize];
    match n % 10 {
        0 => t.to_string(),
        u => format!("{t} y {}", UNITS[u as usize]),
    }
}
