// Twin of globals.njs. Runs under node, whose global object answers to
// both globalThis and the legacy name global.
"use strict";
const OUT = [];
function P(x) {
  return (x !== null && (typeof x === "object" || typeof x === "function"))
      ? "[object]" : String(x);
}
function print(x) { OUT.push(P(x)); }

print(globalThis.NaN);
print(globalThis.Infinity);
print(globalThis.undefined);

print(isNaN("abc"));
print(isNaN("12"));
print(isNaN(""));
print(isNaN(NaN));
print(isNaN(undefined));
print(isNaN(null));
print(isNaN("Infinity"));

print(print);

print(typeof print);
print(typeof Object);
print(typeof isNaN);
print(typeof eval);
print(typeof globalThis);

print(globalThis.global === globalThis);
print(Object === Object);

globalThis.myx = 7;
print(globalThis.myx);
let r = delete globalThis.myx;
print(r);
print(globalThis.myx);

process.stdout.write(OUT.map(s => s + "\n").join(""));
