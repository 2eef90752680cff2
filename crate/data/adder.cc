# full adder: inputs a b cin, outputs sum carry
inputs 3
xor 3 0 1
xor 4 3 2
and 5 0 1
and 6 3 2
or 7 5 6
outputs 4 7
