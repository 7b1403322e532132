#pragma once

#include <array>

namespace sparseshare::reference {

struct CurvePoint {
  double s_d;
  double relative_leakage;
};

// Published optimal trade-off curves for s = 0.95, q = 89. The first is the
// two-share (n = 2) scheme; the second adds the constraint that R itself is
// sparse, i.e. three special values {0, -a, -2a}.
inline constexpr double kSparsity = 0.95;
inline constexpr unsigned kFieldSize = 89;

inline constexpr std::array<CurvePoint, 95> kTwoShareCurve{{
    {0.000196811651249754, 0.00104356458553331},
    {0.0101968116512498, 3.12943990193627e-06},
    {0.0201968116512498, 0.000162780831708812},
    {0.0301968116512498, 0.000576207970147309},
    {0.0401968116512498, 0.00112600809287077},
    {0.0501968116512498, 0.00176671622869742},
    {0.0601968116512498, 0.00247516199629072},
    {0.0701968116512498, 0.00323772046880563},
    {0.0801968116512498, 0.00404563635338079},
    {0.0901968116512498, 0.00489293593989038},
    {0.10019681165125, 0.00577536667028682},
    {0.11019681165125, 0.00668980691463892},
    {0.12019681165125, 0.00763391401693252},
    {0.13019681165125, 0.00860590281468956},
    {0.14019681165125, 0.00960440011055302},
    {0.15019681165125, 0.0106283456065165},
    {0.16019681165125, 0.0116769224554749},
    {0.17019681165125, 0.0127495073603729},
    {0.18019681165125, 0.0138456339659344},
    {0.19019681165125, 0.0149649655276773},
    {0.20019681165125, 0.0161072742061976},
    {0.21019681165125, 0.0172724251910615},
    {0.22019681165125, 0.0184603644116066},
    {0.23019681165125, 0.0196711089579194},
    {0.24019681165125, 0.0209047395828201},
    {0.25019681165125, 0.0221613948265384},
    {0.26019681165125, 0.02344126642581},
    {0.27019681165125, 0.0247445957549116},
    {0.28019681165125, 0.0260716711084058},
    {0.29019681165125, 0.0274228256812255},
    {0.30019681165125, 0.028798436135985},
    {0.31019681165125, 0.0301989216733688},
    {0.32019681165125, 0.0316247435414128},
    {0.33019681165125, 0.03307640493505},
    {0.34019681165125, 0.0345544512496702},
    {0.35019681165125, 0.0360594706623973},
    {0.36019681165125, 0.0375920950230215},
    {0.37019681165125, 0.0391530010434503},
    {0.38019681165125, 0.040742911780544},
    {0.39019681165125, 0.0423625984125329},
    {0.40019681165125, 0.0440128823141388},
    {0.41019681165125, 0.0456946374401458},
    {0.42019681165125, 0.0474087930317455},
    {0.43019681165125, 0.049156336664537},
    {0.44019681165125, 0.0509383176618566},
    {0.45019681165125, 0.0527558509021153},
    {0.46019681165125, 0.0546101210543127},
    {0.47019681165125, 0.0565023872819149},
    {0.48019681165125, 0.0584339884619842},
    {0.49019681165125, 0.0604063489740726},
    {0.50019681165125, 0.0624209851220245},
    {0.51019681165125, 0.0644795122618122},
    {0.52019681165125, 0.066583652720032},
    {0.53019681165125, 0.0687352446011135},
    {0.54019681165125, 0.0709362515969789},
    {0.55019681165125, 0.0731887739313645},
    {0.56019681165125, 0.0754950605928108},
    {0.57019681165125, 0.0778575230362364},
    {0.58019681165125, 0.0802787505638662},
    {0.59019681165125, 0.0827615276332674},
    {0.60019681165125, 0.0853088533847376},
    {0.61019681165125, 0.0879239637340549},
    {0.62019681165125, 0.09061035644196},
    {0.63019681165125, 0.0933718196514962},
    {0.64019681165125, 0.0962124644822628},
    {0.65019681165125, 0.099136762391509},
    {0.66019681165125, 0.102149588162043},
    {0.67019681165125, 0.10525626956439},
    {0.68019681165125, 0.108462644976322},
    {0.69019681165125, 0.111775130541266},
    {0.70019681165125, 0.115200798827624},
    {0.71019681165125, 0.118747471440128},
    {0.72019681165125, 0.122423828668149},
    {0.73019681165125, 0.126239540084614},
    {0.74019681165125, 0.130205421102955},
    {0.75019681165125, 0.134333621958163},
    {0.76019681165125, 0.138637857544362},
    {0.77019681165125, 0.143133689224104},
    {0.78019681165125, 0.147838873431826},
    {0.79019681165125, 0.152773797089302},
    {0.80019681165125, 0.157962027243634},
    {0.81019681165125, 0.163431013035615},
    {0.82019681165125, 0.169212993873581},
    {0.83019681165125, 0.175346191408375},
    {0.84019681165125, 0.18187639941308},
    {0.85019681165125, 0.188859143315447},
    {0.86019681165125, 0.196362674816997},
    {0.87019681165125, 0.204472224397093},
    {0.88019681165125, 0.213296209052346},
    {0.89019681165125, 0.222975593310566},
    {0.90019681165125, 0.233698563732722},
    {0.91019681165125, 0.245724646497749},
    {0.92019681165125, 0.259426754253781},
    {0.93019681165125, 0.275370284433525},
    {0.94019681165125, 0.29447797278307},
}};

inline constexpr std::array<CurvePoint, 95> kThreeConstraintCurve{{
    {0.000196811651249754, 0.00180019440366317},
    {0.0101968116512498, 4.23366220106419e-06},
    {0.0201968116512498, 0.000211499620962855},
    {0.0301968116512498, 0.000731836171384254},
    {0.0401968116512498, 0.00140802488957583},
    {0.0501968116512498, 0.00218346483885121},
    {0.0601968116512498, 0.00303066536020181},
    {0.0701968116512498, 0.00393404188929805},
    {0.0801968116512498, 0.00488387545388441},
    {0.0901968116512498, 0.00587370397985351},
    {0.10019681165125, 0.00689903319333268},
    {0.11019681165125, 0.00795663557736405},
    {0.12019681165125, 0.00904414068607386},
    {0.13019681165125, 0.0101597819027646},
    {0.14019681165125, 0.0113022326958671},
    {0.15019681165125, 0.0124704967739389},
    {0.16019681165125, 0.0136638321136644},
    {0.17019681165125, 0.01488169705569},
    {0.18019681165125, 0.0161237112286752},
    {0.19019681165125, 0.0173896267089858},
    {0.20019681165125, 0.0186793064160728},
    {0.21019681165125, 0.0199927077331552},
    {0.22019681165125, 0.0213298699754698},
    {0.23019681165125, 0.0226909047429996},
    {0.24019681165125, 0.0240759884726909},
    {0.25019681165125, 0.0254853566954285},
    {0.26019681165125, 0.0269192996357022},
    {0.27019681165125, 0.0283781588860047},
    {0.28019681165125, 0.0298623249558161},
    {0.29019681165125, 0.0313722355446818},
    {0.30019681165125, 0.0329083744257739},
    {0.31019681165125, 0.0344712708541489},
    {0.32019681165125, 0.0360614994352241},
    {0.33019681165125, 0.0376796804055802},
    {0.34019681165125, 0.0393264802913541},
    {0.35019681165125, 0.0410026129201191},
    {0.36019681165125, 0.0427088407709609},
    {0.37019681165125, 0.0444459766549237},
    {0.38019681165125, 0.0462148857245597},
    {0.39019681165125, 0.048016487817198},
    {0.40019681165125, 0.0498517601420835},
    {0.41019681165125, 0.0517217403268395},
    {0.42019681165125, 0.0536275298440234},
    {0.43019681165125, 0.0555702978439922},
    {0.44019681165125, 0.0575512854260378},
    {0.45019681165125, 0.059571810385941},
    {0.46019681165125, 0.0616332724848884},
    {0.47019681165125, 0.0637371592922712},
    {0.48019681165125, 0.065885052663424},
    {0.49019681165125, 0.0680786359230877},
    {0.50019681165125, 0.0703197018365755},
    {0.51019681165125, 0.0726101614635399},
    {0.52019681165125, 0.0749520540043091},
    {0.53019681165125, 0.0773475577663698},
    {0.54019681165125, 0.0797990023993159},
    {0.55019681165125, 0.0823088825710604},
    {0.56019681165125, 0.084879873287198},
    {0.57019681165125, 0.0875148470900787},
    {0.58019681165125, 0.0902168934156999},
    {0.59019681165125, 0.0929893404365058},
    {0.60019681165125, 0.0958357797786651},
    {0.61019681165125, 0.0987600945758072},
    {0.62019681165125, 0.101766491410955},
    {0.63019681165125, 0.104859536808481},
    {0.64019681165125, 0.108044199073918},
    {0.65019681165125, 0.111325896448288},
    {0.66019681165125, 0.114710552754588},
    {0.67019681165125, 0.118204661979421},
    {0.68019681165125, 0.121815363568716},
    {0.69019681165125, 0.125550530645159},
    {0.70019681165125, 0.129418873905953},
    {0.71019681165125, 0.133430064673919},
    {0.72019681165125, 0.1375948815093},
    {0.73019681165125, 0.141925386023423},
    {0.74019681165125, 0.14643513518137},
    {0.75019681165125, 0.151139439601068},
    {0.76019681165125, 0.156055680387154},
    {0.77019681165125, 0.161203701229487},
    {0.78019681165125, 0.166606298375183},
    {0.79019681165125, 0.172289839457244},
    {0.80019681165125, 0.178285054295157},
    {0.81019681165125, 0.184628058692366},
    {0.82019681165125, 0.191361699248539},
    {0.83019681165125, 0.198537348844359},
    {0.84019681165125, 0.206217348391936},
    {0.85019681165125, 0.214478397992806},
    {0.86019681165125, 0.223416382130543},
    {0.87019681165125, 0.233153432055816},
    {0.88019681165125, 0.243848613977697},
    {0.89019681165125, 0.25571476855144},
    {0.90019681165125, 0.269046387376769},
    {0.91019681165125, 0.284268737667368},
    {0.92019681165125, 0.302031822188085},
    {0.93019681165125, 0.323411580444017},
    {0.94019681165125, 0.350419499729562},
}};

}  // namespace sparseshare::reference
