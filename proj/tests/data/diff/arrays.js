// Twin of arrays.njs.
"use strict";
const OUT = [];
function P(x) {
  return (x !== null && (typeof x === "object" || typeof x === "function"))
      ? "[object]" : String(x);
}
function print(x) { OUT.push(P(x)); }

const a = new Array();
print(a.length);

print(a.push("a"));
print(a.push(1));
print(a.push(true));
print(a[0]);
print(a[2]);

a[5] = "x";
print(a.length);

print(a.join());
print(a.join("-"));

print(a.pop());
print(a.length);
print(a.pop());
print(a.length);

a.length = 2;
print(a.join(","));
print(a[2]);

a.length = 4;
print(a.length);
print(a.join(","));

a[-1] = "neg";
a[1.5] = "frac";
print(a["-1"]);
print(a["1.5"]);
print(a.length);
print(a.join(","));

print(a.push("z"));
print(a[4]);

a.length = "3";
print(a.length);
print("0" in a);
print("4" in a);
print("length" in a);

process.stdout.write(OUT.map(s => s + "\n").join(""));
