// Twin of wrappers.njs. Object(primitive) boxes the value there too.
"use strict";
const OUT = [];
function P(x) {
  return (x !== null && (typeof x === "object" || typeof x === "function"))
      ? "[object]" : String(x);
}
function print(x) { OUT.push(P(x)); }

const w = Object("hello");
print(w.length);
print(typeof w);
print(Boolean(w));

let w2 = Object("");
print(Boolean(w2));
print(w2.length);

w2 = Object("hello");
print(w === w2);

const o = new Object();
w2 = Object(o);
print(w2 === o);

let wn = Object(42);
print(typeof wn);
print(wn.missing);
wn.tag = "T";
print(wn.tag);
wn = Object(0);
print(Boolean(wn));

const wb = Object(false);
print(Boolean(wb));

print(w instanceof Object);
print(wn instanceof Object);

print("length" in w);
print("length" in wn);
print(w.hasOwnProperty("length"));

process.stdout.write(OUT.map(s => s + "\n").join(""));
