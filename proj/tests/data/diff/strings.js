// Twin of strings.njs.
"use strict";
const OUT = [];
function P(x) {
  return (x !== null && (typeof x === "object" || typeof x === "function"))
      ? "[object]" : String(x);
}
function print(x) { OUT.push(P(x)); }

let s = "";

s = "ab" + "cd" + "";
print(s);
print("x" + ("y" + "z"));
print("" + String(NaN));
print("n=" + String(42));
print(String(1) + String(2));

print("a" < "ab");
print("ab" < "aa");
print("B" < "a");
print("" <= "");
print("ab" <= "abc");

print("abc" === "abc");
print("abc" == "abd");

const w = Object(s);
print(w.length);

print(String(Number("007")));
print(String(Number("1e3")));
print(String(Number(".5")));
print(Number(String(0.1)));

const ch = new Array();
ch.push("a");
ch.push("b");
ch.push("c");
print(ch.join(""));
print(ch.join("--"));

print(typeof s);
print(typeof (s + s));

process.stdout.write(OUT.map(s2 => s2 + "\n").join(""));
