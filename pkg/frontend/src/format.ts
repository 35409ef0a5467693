// Number formatting that matches the engine's canonical JSON byte-for-byte.
// The API renders every float at 12 significant digits (C "%.12g" rules:
// scientific when the decimal exponent is < -4 or >= 12, trailing zeros
// stripped, two-digit signed exponent). Rendering API values through fmt12
// guarantees the UI shows exactly the serialized number.

export function fmt12(x: number): string {
  if (x === 0) return "0";
  if (!isFinite(x)) return "null";
  const [mant, expStr] = x.toExponential(11).split("e");
  const exp = parseInt(expStr, 10);
  let digits = mant.replace("-", "").replace(".", "");
  digits = digits.replace(/0+$/, "") || "0";
  const neg = x < 0;
  if (exp < -4 || exp >= 12) {
    let m = digits[0];
    if (digits.length > 1) m += "." + digits.slice(1);
    const a = Math.abs(exp);
    return (neg ? "-" : "") + m + "e" + (exp < 0 ? "-" : "+") + (a < 10 ? "0" : "") + a;
  }
  let s: string;
  if (exp >= digits.length - 1) {
    s = digits + "0".repeat(exp - digits.length + 1);
  } else if (exp >= 0) {
    s = digits.slice(0, exp + 1) + "." + digits.slice(exp + 1);
  } else {
    s = "0." + "0".repeat(-exp - 1) + digits;
  }
  return (neg ? "-" : "") + s;
}

// Short human-facing form for axis labels and deltas (display only; never
// used for the measure readouts, which must match the API exactly).
export function fmtShort(x: number | null | undefined, places = 3): string {
  if (x == null || !isFinite(x)) return "—";
  return x.toFixed(places);
}

export function fmtMeasure(x: number | null | undefined): string {
  if (x == null) return "∞";
  return fmt12(x);
}
