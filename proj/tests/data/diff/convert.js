// Twin of convert.njs. tonum/tostr/tobool correspond to Number, String,
// and Boolean; ++ is string concatenation after String on both sides.
"use strict";
const OUT = [];
function P(x) {
  return (x !== null && (typeof x === "object" || typeof x === "function"))
      ? "[object]" : String(x);
}
function print(x) { OUT.push(P(x)); }

print(Number(""));
print(Number(" "));
print(Number(" 12 "));
print(Number("0x10"));
print(Number("0x"));
print(Number("1e3"));
print(Number(" -4.5e-1"));
print(Number("Infinity"));
print(Number("-Infinity"));
print(Number("+Infinity"));
print(Number("1e999"));
print(Number("1e-999"));
print(Number(".5"));
print(Number("5."));
print(Number("+.5"));
print(Number("1.2.3"));
print(Number("12abc"));
print(Number("1 2"));
print(Number("007"));
print(Number(true));
print(Number(false));
print(Number(null));
print(Number(undefined));
print(String(0));
print(String(-0));
print(String(1e21));
print(String(1e20));
print(String(1e-6));
print(String(1e-7));
print(String(0.1));
print(String(123456.789));
print(String(NaN));
print(String(Infinity));
print(String(-Infinity));
print(String(5e-324));
print(String(1.7976931348623157e308));
print(String(2.5e-10));
print(String(9007199254740994));
print(String("a") + String(1));
print(String(1.5) + String("x"));
print(String(true) + String(null));
print(String(undefined) + String(""));
print(String("") + String(-0));
print(String("") + String(1e21));
print(Boolean(""));
print(Boolean("0"));
print(Boolean(0));
print(Boolean(-0));
print(Boolean(NaN));
print(Boolean(null));
print(Boolean(undefined));
print(Boolean("false"));
print(Boolean(1e-323));
print(typeof 1);
print(typeof "x");
print(typeof true);
print(typeof undefined);
print(typeof null);

process.stdout.write(OUT.map(s => s + "\n").join(""));
